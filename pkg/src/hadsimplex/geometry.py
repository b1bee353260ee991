"""Simplices in exact rational arithmetic.

Everything here is exact: coordinates are :class:`fractions.Fraction`, the
vertex-matrix determinant comes from fraction-free elimination, and the basic
Lagrange polynomials are the columns of the exact inverse of the vertex
matrix.  No floating point is involved.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import (
    DegenerateSimplexError,
    DimensionMismatchError,
    InvariantViolation,
    NormalizationRequiredError,
)
from .hadamard import HadamardMatrix, verify


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def _frac_matrix(M) -> list:
    return [[_frac(v) for v in row] for row in M]


def bareiss_determinant(M: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a square rational matrix.

    Rows are scaled to integers by their common denominator, the integer
    matrix goes through Bareiss elimination, and the scaling is divided out.
    """
    rows = _frac_matrix(M)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatchError("determinant needs a square matrix")
    if n == 0:
        return Fraction(1)
    scale = 1
    a = []
    for r in rows:
        d = lcm(*(v.denominator for v in r))
        scale *= d
        a.append([int(v * d) for v in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return Fraction(sign * a[n - 1][n - 1], scale)


def exact_inverse(M: Sequence[Sequence]) -> list:
    """Gauss-Jordan inverse over the rationals; raises on a singular matrix."""
    a = _frac_matrix(M)
    n = len(a)
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise DegenerateSimplexError("matrix is singular")
        if p != c:
            a[c], a[p] = a[p], a[c]
            inv[c], inv[p] = inv[p], inv[c]
        piv = a[c][c]
        if piv != 1:
            a[c] = [v / piv for v in a[c]]
            inv[c] = [v / piv for v in inv[c]]
        for r in range(n):
            f = a[r][c]
            if r != c and f != 0:
                ar, ac, ir, ic = a[r], a[c], inv[r], inv[c]
                for j in range(n):
                    if ac[j]:
                        ar[j] -= f * ac[j]
                    if ic[j]:
                        ir[j] -= f * ic[j]
    return inv


@dataclass(frozen=True)
class Cube:
    """Axis-parallel cube ``center + half_side * [-1, 1]^n``."""

    dimension: int
    center: tuple
    half_side: Fraction

    def __post_init__(self):
        center = tuple(_frac(c) for c in self.center)
        if len(center) != self.dimension:
            raise DimensionMismatchError("center has the wrong dimension")
        half = _frac(self.half_side)
        if half <= 0:
            raise ValueError("half_side must be positive")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "half_side", half)

    @classmethod
    def symmetric(cls, n: int) -> "Cube":
        """``[-1, 1]^n``"""
        return cls(n, (0,) * n, Fraction(1))

    @classmethod
    def unit(cls, n: int) -> "Cube":
        """``[0, 1]^n``"""
        return cls(n, (Fraction(1, 2),) * n, Fraction(1, 2))

    @property
    def is_symmetric(self) -> bool:
        return self.half_side == 1 and not any(self.center)

    def vertex(self, mask: int) -> tuple:
        """Vertex whose i-th coordinate is on the upper face iff bit i of ``mask`` is set."""
        r = self.half_side
        return tuple(c + r if mask >> i & 1 else c - r for i, c in enumerate(self.center))

    def to_symmetric(self, x: Sequence) -> tuple:
        """Affine image of ``x`` under the map sending this cube onto ``[-1, 1]^n``."""
        return tuple((_frac(v) - c) / self.half_side for v, c in zip(x, self.center))


@dataclass(frozen=True)
class Simplex:
    vertices: tuple
    hadamard: HadamardMatrix | None = field(default=None, compare=False)

    def __post_init__(self):
        verts = tuple(tuple(_frac(v) for v in x) for x in self.vertices)
        n = len(verts) - 1
        if n < 0 or any(len(x) != n for x in verts):
            raise DimensionMismatchError("a simplex in R^n needs n+1 vertices with n coordinates")
        object.__setattr__(self, "vertices", verts)

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1

    def vertex_matrix(self) -> list:
        return [list(x) + [Fraction(1)] for x in self.vertices]

    @property
    def determinant(self) -> Fraction:
        return bareiss_determinant(self.vertex_matrix())

    def centroid(self) -> tuple:
        k = len(self.vertices)
        return tuple(sum(col) / k for col in zip(*self.vertices)) if self.dimension else ()

    def mapped(self, cube: Cube) -> "Simplex":
        """This simplex moved by the affine map that sends ``cube`` onto ``[-1, 1]^n``."""
        return Simplex(tuple(cube.to_symmetric(x) for x in self.vertices), self.hadamard)


@dataclass(frozen=True)
class LagrangeEvaluator:
    """Coefficients of the basic Lagrange polynomials of a simplex.

    ``coefficients[i][j]`` is the (i, j) entry of the inverse vertex matrix, so
    column j holds the linear coefficients of lambda_j followed by its constant.
    """

    dimension: int
    coefficients: tuple
    determinant: Fraction
    simplex: Simplex = field(compare=False, repr=False)

    def __call__(self, x: Sequence) -> tuple:
        return barycentric(self, x)

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.coefficients)


def simplex_from_hadamard(H: HadamardMatrix) -> Simplex:
    """Regular simplex in ``[-1, 1]^n`` whose vertex matrix is ``H``."""
    if not verify(H):
        raise InvariantViolation("matrix is not Hadamard")
    if any(v != 1 for v in H.last_column()):
        raise NormalizationRequiredError(
            "last column must be all +1; apply normalize_last_column first"
        )
    return Simplex(tuple(r[:-1] for r in H.rows), hadamard=H)


def build_evaluator(S: Simplex) -> LagrangeEvaluator:
    vm = S.vertex_matrix()
    det = bareiss_determinant(vm)
    if det == 0:
        raise DegenerateSimplexError("simplex is degenerate (zero determinant)")
    inv = exact_inverse(vm)
    if S.hadamard is not None:
        m = S.dimension + 1
        fast = [[Fraction(S.hadamard.rows[j][i], m) for j in range(m)] for i in range(m)]
        if fast != inv:
            raise InvariantViolation("(n+1) * S^-1 differs from S^T for a Hadamard simplex")
        inv = fast
    return LagrangeEvaluator(
        dimension=S.dimension,
        coefficients=tuple(tuple(r) for r in inv),
        determinant=det,
        simplex=S,
    )


def barycentric(ev: LagrangeEvaluator, x: Sequence) -> tuple:
    n = ev.dimension
    if len(x) != n:
        raise DimensionMismatchError(f"point has {len(x)} coordinates, expected {n}")
    y = [_frac(v) for v in x] + [Fraction(1)]
    C = ev.coefficients
    return tuple(sum(y[i] * C[i][j] for i in range(n + 1) if y[i]) for j in range(n + 1))


def squared_distance(x: Sequence, y: Sequence) -> Fraction:
    return sum((_frac(a) - _frac(b)) ** 2 for a, b in zip(x, y))


def is_regular(S: Simplex, check_circumradius: bool = False) -> bool:
    """True iff all edges have the same length.

    With ``check_circumradius`` and a simplex centred at the origin whose
    vertices satisfy ``|x|^2 = n``, also require the squared edge ``2(n+1)``
    that a circumradius of ``sqrt(n)`` forces.
    """
    V = S.vertices
    d2 = {squared_distance(V[j], V[k]) for j in range(len(V)) for k in range(j + 1, len(V))}
    if len(d2) > 1:
        return False
    n = S.dimension
    if check_circumradius and d2 and not any(S.centroid()):
        if all(squared_distance(x, [0] * n) == n for x in V) and d2 != {2 * (n + 1)}:
            raise InvariantViolation(f"squared edge {d2.pop()} != 2(n+1) for circumradius sqrt(n)")
    return True
