"""Exact projector norms over a cube by exhaustive vertex enumeration.

Both scan paths reduce the barycentric coordinates at a cube vertex to
integer numerators over one common denominator ``D``::

    D * lambda_j(c + r*s) = a_j + sum_i s_i * B[i, j],   s in {-1, +1}^n

so maxima, maximizer sets and sign counts are decided in exact integer
arithmetic.  Vertex ``s`` is encoded as an n-bit mask, bit i set meaning
``s_i = +1``.

The vertex space is cut as ``mask = high << k | low``: a table over the low
``k`` bits is combined with one base vector per high pattern.  The generic
path computes table and bases by matrix products; the Hadamard path walks
both in Gray-code order, updating the dot products ``(h_j, (x, 1))`` by
``+-2 h_ij`` on each single-coordinate flip.
"""
from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import CapacityError, DimensionMismatchError, NormalizationRequiredError
from .geometry import Cube, LagrangeEvaluator
from .hadamard import HadamardMatrix, verify
from .errors import InvariantViolation

MAX_DIMENSION = 30
LOW_BITS = 12
DEFAULT_MAXIMIZER_CAP = 1 << 16
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class NormReport:
    """Result of one exhaustive scan.

    ``maximizers`` holds the smallest ``cap`` maximizing masks in increasing
    order; it is the full set whenever ``len(maximizers) == maximizer_count``.
    ``census`` maps mu to the number of maximizers with exactly mu strictly
    negative barycentric coordinates.  ``min_lambda`` is the least barycentric
    coordinate over all cube vertices.
    """

    dimension: int
    norm: Fraction
    maximizers: tuple
    maximizer_count: int
    census: dict
    min_lambda: Fraction
    elapsed: float = field(default=0.0, compare=False)

    @property
    def complete(self) -> bool:
        return len(self.maximizers) == self.maximizer_count

    def maximizer_bits(self) -> list:
        return [mask_to_bits(m, self.dimension) for m in self.maximizers]


def mask_to_bits(mask: int, n: int) -> str:
    """Bit string whose i-th character is bit i of ``mask``."""
    return "".join("1" if mask >> i & 1 else "0" for i in range(n))


def bits_to_mask(bits: str) -> int:
    return sum(1 << i for i, c in enumerate(bits) if c == "1")


def sign_matrix(masks: np.ndarray, nbits: int, offset: int = 0) -> np.ndarray:
    """Rows of +-1 for bits ``offset .. offset+nbits-1`` of each mask."""
    shifts = np.arange(offset, offset + nbits, dtype=np.int64)
    bits = (np.asarray(masks, dtype=np.int64)[:, None] >> shifts) & 1
    return 2 * bits - 1


# -- integer forms -----------------------------------------------------------


@dataclass(frozen=True)
class _Form:
    """``D * lambda(s) = offset + s @ coef`` with integer arrays."""

    n: int
    denominator: int
    offset: np.ndarray
    coef: np.ndarray
    gray: bool


def _generic_form(ev: LagrangeEvaluator, cube: Cube) -> _Form:
    n = ev.dimension
    C = ev.coefficients
    r = cube.half_side
    const = [sum((cube.center[i] * C[i][j] for i in range(n)), C[n][j]) for j in range(n + 1)]
    lin = [[r * C[i][j] for j in range(n + 1)] for i in range(n)]
    D = lcm(*(v.denominator for v in const), *(v.denominator for row in lin for v in row))
    offset = [int(v * D) for v in const]
    coef = [[int(v * D) for v in row] for row in lin]
    bound = max(abs(o) + sum(abs(row[j]) for row in coef) for j, o in enumerate(offset))
    dtype = np.int64 if bound * (n + 1) < _INT64_SAFE else object
    return _Form(
        n, D, np.array(offset, dtype=dtype), np.array(coef, dtype=dtype).reshape(n, n + 1), False
    )


def _hadamard_form(H: HadamardMatrix) -> _Form:
    if not verify(H):
        raise InvariantViolation("matrix is not Hadamard")
    if any(v != 1 for v in H.last_column()):
        raise NormalizationRequiredError("last column must be all +1")
    h = H.to_array()
    n = H.order - 1
    # lambda_j(x) = (h_j, (x, 1)) / (n + 1)
    return _Form(n, n + 1, h[:, n].copy(), np.ascontiguousarray(h[:, :n].T), True)


# -- block tables --------------------------------------------------------------


def _gray(i):
    return i ^ (i >> 1)


def _low_table_matmul(form: _Form, k: int) -> np.ndarray:
    masks = np.arange(1 << k, dtype=np.int64)
    return sign_matrix(masks, k) @ form.coef[:k]


def _low_table_gray(form: _Form, k: int) -> np.ndarray:
    coef = form.coef
    table = np.empty((1 << k, form.n + 1), dtype=coef.dtype)
    cur = -coef[:k].sum(axis=0)
    table[0] = cur
    for i in range(1, 1 << k):
        t = (i & -i).bit_length() - 1
        g = _gray(i)
        cur = cur + 2 * coef[t] if g >> t & 1 else cur - 2 * coef[t]
        table[g] = cur
    return table


def _high_bases_matmul(form: _Form, k: int, lo: int, hi: int):
    m = form.n - k
    codes = np.arange(lo, hi, dtype=np.int64)
    bases = form.offset + sign_matrix(codes, m) @ form.coef[k:] if m else (
        np.broadcast_to(form.offset, (hi - lo, form.n + 1))
    )
    return zip(codes.tolist(), bases)


def _high_bases_gray(form: _Form, k: int, lo: int, hi: int):
    m = form.n - k
    coef = form.coef[k:]
    g = _gray(lo)
    s = sign_matrix(np.array([g]), m)[0] if m else np.zeros(0, dtype=np.int64)
    cur = form.offset + s @ coef
    yield g, cur
    for i in range(lo + 1, hi):
        t = (i & -i).bit_length() - 1
        g = _gray(i)
        cur = cur + 2 * coef[t] if g >> t & 1 else cur - 2 * coef[t]
        yield g, cur


# -- reduction -------------------------------------------------------------------


class _Partial:
    """Running max / maximizer set / census / minimum for part of the vertex space."""

    __slots__ = ("best", "count", "census", "chunks", "stored", "minval", "cap")

    def __init__(self, cap: int):
        self.best = None
        self.count = 0
        self.census = Counter()
        self.chunks = []
        self.stored = 0
        self.minval = None
        self.cap = cap

    def _reset(self, best):
        self.best = best
        self.count = 0
        self.census = Counter()
        self.chunks = []
        self.stored = 0

    def _store(self, masks: np.ndarray):
        if self.cap <= 0 or not len(masks):
            return
        self.chunks.append(masks)
        self.stored += len(masks)
        if self.stored > 2 * self.cap:
            self._compact()

    def _compact(self):
        if self.chunks:
            allm = np.sort(np.concatenate(self.chunks))[: self.cap]
            self.chunks = [allm]
            self.stored = len(allm)

    def add_block(self, vals: np.ndarray, masks_base: int):
        sums = np.abs(vals).sum(axis=1)
        mx = sums.max()
        mn = vals.min()
        if self.minval is None or mn < self.minval:
            self.minval = mn
        if self.best is not None and mx < self.best:
            return
        if self.best is None or mx > self.best:
            self._reset(mx)
        idx = np.flatnonzero(sums == mx)
        neg = (vals[idx] < 0).sum(axis=1)
        self.count += len(idx)
        self.census.update(Counter(np.asarray(neg, dtype=np.int64).tolist()))
        self._store(masks_base | idx.astype(np.int64))

    def merge(self, other: "_Partial"):
        if other.minval is not None and (self.minval is None or other.minval < self.minval):
            self.minval = other.minval
        if other.best is None or (self.best is not None and other.best < self.best):
            return
        if self.best is None or other.best > self.best:
            self._reset(other.best)
        self.count += other.count
        self.census.update(other.census)
        for c in other.chunks:
            self._store(c)

    def finish(self):
        self._compact()
        masks = tuple(int(m) for m in self.chunks[0]) if self.chunks else ()
        return int(self.best), self.count, dict(sorted(self.census.items())), masks, int(self.minval)


def _scan_range(form: _Form, k: int, lo: int, hi: int, cap: int) -> _Partial:
    if form.gray:
        table = _low_table_gray(form, k)
        bases = _high_bases_gray(form, k, lo, hi)
    else:
        table = _low_table_matmul(form, k)
        bases = _high_bases_matmul(form, k, lo, hi)
    part = _Partial(cap)
    for code, base in bases:
        part.add_block(table + base, code << k)
    return part


def _ranges(total: int, parts: int):
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    lo = 0
    for p in range(parts):
        hi = lo + step + (p < extra)
        yield lo, hi
        lo = hi


def _scan(form: _Form, workers: int, cap: int) -> NormReport:
    n = form.n
    if n > MAX_DIMENSION:
        raise CapacityError(f"dimension {n} exceeds the 2**{MAX_DIMENSION} enumeration budget")
    t0 = time.perf_counter()
    k = min(n, LOW_BITS)
    total = 1 << (n - k)
    workers = max(1, int(workers))
    ranges = list(_ranges(total, workers * 4 if workers > 1 else 1))
    if workers == 1 or len(ranges) == 1:
        partials = [_scan_range(form, k, lo, hi, cap) for lo, hi in ranges]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_scan_range, form, k, lo, hi, cap) for lo, hi in ranges]
            partials = [f.result() for f in futs]
    acc = _Partial(cap)
    for p in partials:
        acc.merge(p)
    best, count, census, masks, minval = acc.finish()
    D = form.denominator
    return NormReport(
        dimension=n,
        norm=Fraction(best, D),
        maximizers=masks,
        maximizer_count=count,
        census=census,
        min_lambda=Fraction(minval, D),
        elapsed=time.perf_counter() - t0,
    )


# -- public API ----------------------------------------------------------------


def projector_norm(
    ev: LagrangeEvaluator,
    cube: Cube | None = None,
    workers: int = 1,
    cap: int = DEFAULT_MAXIMIZER_CAP,
) -> NormReport:
    """Norm of the interpolation projector of ``ev``'s simplex on ``cube``.

    The maximum of ``sum_j |lambda_j(x)|`` over the cube is attained at a
    vertex, so all ``2**n`` vertices are scanned.  ``cube`` defaults to
    ``[-1, 1]^n``.
    """
    n = ev.dimension
    if cube is None:
        cube = Cube.symmetric(n)
    if cube.dimension != n:
        raise DimensionMismatchError(f"cube dimension {cube.dimension} != simplex dimension {n}")
    if n > MAX_DIMENSION:
        raise CapacityError(f"dimension {n} exceeds the 2**{MAX_DIMENSION} enumeration budget")
    return _scan(_generic_form(ev, cube), workers, cap)


def hadamard_fast_path(
    H: HadamardMatrix, workers: int = 1, cap: int = DEFAULT_MAXIMIZER_CAP
) -> NormReport:
    """Same report as :func:`projector_norm` on ``[-1, 1]^n`` for the simplex of ``H``.

    ``H`` must be Hadamard with an all-ones last column.
    """
    return _scan(_hadamard_form(H), workers, cap)


def vertex_values(ev: LagrangeEvaluator, cube: Cube | None = None, max_dim: int = 20):
    """``(D, V)`` with ``V[mask, j] = D * lambda_j(vertex(mask))`` for every vertex.

    Meant for checks that need per-vertex data; memory is ``2**n * (n+1)``.
    """
    n = ev.dimension
    if cube is None:
        cube = Cube.symmetric(n)
    if n > max_dim:
        raise CapacityError(f"dimension {n} too large for a full vertex table")
    form = _generic_form(ev, cube)
    masks = np.arange(1 << n, dtype=np.int64)
    return form.denominator, form.offset + sign_matrix(masks, n) @ form.coef


def verify_sqrt_bound(report: NormReport) -> bool:
    """``norm <= sqrt(n+1)``, decided as ``norm**2 <= n+1`` in rationals."""
    return report.norm * report.norm <= report.dimension + 1
