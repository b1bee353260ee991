"""Regular simplices from Hadamard matrices and exact norms of their interpolation projectors."""

__version__ = "0.1.0"

from .absorption import AbsorptionReport, absorption_index, check_xi_inequalities, xi_from_report
from .ball import BallNormResult, ball_projector_norm, cube_ball_consistency, psi, split_point
from .bounds import BoundsRow, bounds_row, h_from_hadamard_equality, maxdet01_bruteforce, maxvol_norm_bound
from .cube_norm import NormReport, hadamard_fast_path, projector_norm, verify_sqrt_bound
from .geometry import (
    Cube,
    LagrangeEvaluator,
    Simplex,
    bareiss_determinant,
    barycentric,
    build_evaluator,
    is_regular,
    simplex_from_hadamard,
)
from .hadamard import (
    EquivalenceOp,
    HadamardMatrix,
    apply_op,
    normalize_last_column,
    paley_I,
    parse_matrix,
    serialize_matrix,
    sylvester,
    verify,
)

__all__ = [
    "AbsorptionReport",
    "BallNormResult",
    "BoundsRow",
    "Cube",
    "EquivalenceOp",
    "HadamardMatrix",
    "LagrangeEvaluator",
    "NormReport",
    "Simplex",
    "absorption_index",
    "apply_op",
    "ball_projector_norm",
    "bareiss_determinant",
    "barycentric",
    "bounds_row",
    "build_evaluator",
    "check_xi_inequalities",
    "cube_ball_consistency",
    "h_from_hadamard_equality",
    "hadamard_fast_path",
    "is_regular",
    "maxdet01_bruteforce",
    "normalize_last_column",
    "paley_I",
    "parse_matrix",
    "projector_norm",
    "psi",
    "serialize_matrix",
    "simplex_from_hadamard",
    "split_point",
    "sylvester",
    "maxvol_norm_bound",
    "verify",
    "verify_sqrt_bound",
    "xi_from_report",
]
