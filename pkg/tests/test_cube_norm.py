import random
from fractions import Fraction

import numpy as np
import pytest

from hadsimplex.cube_norm import (
    MAX_DIMENSION,
    NormReport,
    bits_to_mask,
    hadamard_fast_path,
    mask_to_bits,
    projector_norm,
    sign_matrix,
    vertex_values,
    verify_sqrt_bound,
)
from hadsimplex.errors import CapacityError, DimensionMismatchError
from hadsimplex.geometry import (
    Cube,
    LagrangeEvaluator,
    Simplex,
    build_evaluator,
    simplex_from_hadamard,
)
from hadsimplex.hadamard import EquivalenceOp, apply_ops, normalize_last_column
from oracles import brute_norm, det_gauss

F = Fraction


def _maxer_tuples(report, cube):
    return sorted(cube.vertex(m) for m in report.maximizers)


def test_mask_bits_roundtrip():
    assert mask_to_bits(0b101, 4) == "1010"
    assert bits_to_mask("1010") == 0b101
    for m in range(64):
        assert bits_to_mask(mask_to_bits(m, 6)) == m


def test_sign_matrix_layout():
    s = sign_matrix(np.array([0b110]), 3)
    assert s.tolist() == [[-1, 1, 1]]
    s = sign_matrix(np.array([0b110]), 2, offset=1)
    assert s.tolist() == [[1, 1]]


@pytest.mark.parametrize("m", [2, 4, 8])
def test_hadamard_simplex_matches_oracle(m, normalized):
    S = simplex_from_hadamard(normalized(m))
    n = m - 1
    rep = projector_norm(build_evaluator(S))
    norm, maxers, census = brute_norm(S.vertices, [0] * n, 1)
    assert rep.norm == norm
    assert rep.census == census
    assert _maxer_tuples(rep, Cube.symmetric(n)) == maxers


def _random_simplex(rng, n):
    while True:
        V = [[F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)] for _ in range(n + 1)]
        if det_gauss([v + [1] for v in V]) != 0:
            return Simplex(tuple(map(tuple, V)))


@pytest.mark.parametrize("seed", range(6))
def test_random_simplex_matches_oracle(seed):
    rng = random.Random(seed)
    n = 1 + seed % 4
    S = _random_simplex(rng, n)
    cube = Cube(n, tuple(F(rng.randint(-2, 2), 3) for _ in range(n)), F(rng.randint(1, 4), 2))
    rep = projector_norm(build_evaluator(S), cube)
    norm, maxers, census = brute_norm(S.vertices, cube.center, cube.half_side)
    assert rep.norm == norm
    assert rep.census == census
    assert _maxer_tuples(rep, cube) == maxers


def test_order_two_norm_is_one(normalized):
    rep = hadamard_fast_path(normalized(2))
    assert rep.dimension == 1 and rep.norm == 1


def test_known_small_orders(normalized):
    assert hadamard_fast_path(normalized(4)).census == {1: 4}
    r8 = hadamard_fast_path(normalized(8))
    assert (r8.norm, r8.census) == (F(5, 2), {1: 8, 3: 56})
    r12 = hadamard_fast_path(normalized(12))
    assert (r12.norm, r12.census) == (3, {3: 220, 4: 660, 6: 220})


@pytest.mark.parametrize("m", [2, 4, 8, 12, 16])
def test_fast_path_equals_generic(m, normalized):
    H = normalized(m)
    fast = hadamard_fast_path(H)
    generic = projector_norm(build_evaluator(simplex_from_hadamard(H)))
    assert fast == generic
    assert fast.maximizers == generic.maximizers


@pytest.mark.parametrize("m", [4, 8, 12])
def test_unit_cube_invariance(m, normalized):
    S = simplex_from_hadamard(normalized(m))
    n = S.dimension
    U = Simplex(tuple(tuple((v + 1) * F(1, 2) for v in x) for x in S.vertices))
    sym = projector_norm(build_evaluator(S))
    unit = projector_norm(build_evaluator(U), Cube.unit(n))
    assert sym == unit


@pytest.mark.parametrize("m", [2, 4, 8, 12, 16])
def test_sqrt_bound_and_vertex_sums(m, normalized):
    S = simplex_from_hadamard(normalized(m))
    n = S.dimension
    ev = build_evaluator(S)
    rep = hadamard_fast_path(normalized(m))
    assert verify_sqrt_bound(rep)
    D, V = vertex_values(ev)
    sums = np.abs(V).sum(axis=1)
    assert (sums >= D).all()
    # equality only at the simplex's own vertices (which lie on the cube)
    on_simplex = {Cube.symmetric(n).vertex(k) for k in range(1 << n)} & set(S.vertices)
    eq = {Cube.symmetric(n).vertex(int(k)) for k in np.flatnonzero(sums == D)}
    assert eq == on_simplex
    # per-vertex Cauchy-Schwarz: (sum |l|)^2 <= (n+1) sum l^2
    assert (sums.astype(object) ** 2 <= (n + 1) * (V.astype(object) ** 2).sum(axis=1)).all()
    assert F(int(sums.max()), D) == rep.norm


@pytest.mark.parametrize("m", [12, 16])
def test_worker_count_does_not_change_report(m, normalized):
    H = normalized(m)
    base = hadamard_fast_path(H)
    for w in (2, 3, 5):
        other = hadamard_fast_path(H, workers=w)
        assert other == base and other.maximizers == base.maximizers
    ev = build_evaluator(simplex_from_hadamard(H))
    assert projector_norm(ev, workers=3) == base


def test_equivalent_matrices_share_norm(normalized):
    H = normalized(12)
    rng = random.Random(5)
    ops = [EquivalenceOp("swap-rows", tuple(rng.sample(range(1, 13), 2))) for _ in range(4)]
    ops += [EquivalenceOp("swap-cols", tuple(rng.sample(range(1, 12), 2))) for _ in range(4)]
    ops += [EquivalenceOp("negate-col", (rng.randint(1, 11),)) for _ in range(3)]
    G = normalize_last_column(apply_ops(H, ops))
    a, b = hadamard_fast_path(H), hadamard_fast_path(G)
    assert (a.norm, a.census, a.maximizer_count) == (b.norm, b.census, b.maximizer_count)


def test_cap_keeps_smallest_masks(normalized):
    H = normalized(16)
    full = hadamard_fast_path(H)
    capped = hadamard_fast_path(H, cap=10)
    assert capped.maximizer_count == full.maximizer_count == 448
    assert capped.maximizers == full.maximizers[:10]
    assert not capped.complete and full.complete
    assert hadamard_fast_path(H, cap=0).maximizers == ()


def test_min_lambda_regression(normalized):
    assert hadamard_fast_path(normalized(4)).min_lambda == F(-1, 2)


def test_capacity_and_dimension_errors():
    n = MAX_DIMENSION + 1
    ev = LagrangeEvaluator(n, tuple((F(0),) * (n + 1) for _ in range(n + 1)), F(1), None)
    with pytest.raises(CapacityError):
        projector_norm(ev)
    seg = build_evaluator(Simplex(((-1,), (1,))))
    with pytest.raises(DimensionMismatchError):
        projector_norm(seg, Cube.symmetric(2))
    with pytest.raises(CapacityError):
        vertex_values(seg, max_dim=0)


def test_verify_sqrt_bound_examples():
    def rep(n, norm):
        return NormReport(n, F(norm), (), 0, {}, F(0))

    assert verify_sqrt_bound(rep(3, 2))
    assert not verify_sqrt_bound(rep(3, F(201, 100)))
    assert verify_sqrt_bound(rep(23, F(9, 2)))
