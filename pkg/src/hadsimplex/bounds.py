"""Maximal 0/1 determinants and the bounds built on them.

``h_n`` is the largest determinant of an n x n matrix with entries 0 or 1 and
``nu_n = h_n / n!`` the largest volume of a simplex in ``[0, 1]^n``.  Exact
``h_n`` values come from one of two sources: exhaustive search (small n) or
the equality case of the Hadamard bound, certified by an actual Hadamard
matrix of order n+1.  Nothing is taken from tables.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import e, factorial, sqrt

import numpy as np

from .errors import CapacityError, InvalidParameterError, InvariantViolation
from .geometry import bareiss_determinant
from .hadamard import HadamardMatrix, constructible, verify

MAX_BRUTEFORCE_N = 6
BRUTEFORCE = "bruteforce"
HADAMARD_EQUALITY = "hadamard-equality"
BOUND_ONLY = "bound-only"


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _maxdet_search(n: int):
    """Return ``(h_n, witness)`` by exhaustive search.

    Pruning: a maximizing matrix has distinct rows, row order only flips the
    sign, and columns may be permuted.  So the first row is taken to be a row
    of least weight w, moved to ``1^w 0^(n-w)``; the next n-2 rows are an
    increasing choice among the other rows of weight >= w; the last row is
    optimized in closed form, since the determinant is linear in it with the
    cofactor vector as coefficients.
    """
    if n == 1:
        return 1, [[1]]
    best, witness = 0, None
    rows_all = list(range(1, 1 << n))
    shifts = np.arange(n)
    signs = np.array([(-1) ** (n - 1 + j) for j in range(n)])
    keep = [[c for c in range(n) if c != j] for j in range(n)]
    for w in range(1, n + 1):
        r1 = (1 << w) - 1
        pool = np.array([r for r in rows_all if _popcount(r) >= w and r != r1], dtype=np.int64)
        if len(pool) < n - 2:
            continue
        combos = np.array(list(combinations(range(len(pool)), n - 2)), dtype=np.int64)
        combos = combos.reshape(len(combos), n - 2)
        for start in range(0, len(combos), 50_000):
            chunk = combos[start : start + 50_000]
            masks = np.concatenate(
                [np.full((len(chunk), 1), r1, dtype=np.int64), pool[chunk]], axis=1
            )
            mats = ((masks[:, :, None] >> shifts) & 1).astype(np.float64)
            cof = np.stack([np.linalg.det(mats[:, :, keep[j]]) for j in range(n)], axis=1)
            cof = np.rint(cof).astype(np.int64) * signs
            pos = np.where(cof > 0, cof, 0).sum(axis=1)
            neg = -np.where(cof < 0, cof, 0).sum(axis=1)
            val = np.maximum(pos, neg)
            i = int(np.argmax(val))
            if val[i] > best:
                best = int(val[i])
                c = cof[i]
                last = (c > 0) if pos[i] >= neg[i] else (c < 0)
                witness = mats[i].astype(int).tolist() + [last.astype(int).tolist()]
    return best, witness


@lru_cache(maxsize=None)
def _maxdet_cached(n: int):
    best, witness = _maxdet_search(n)
    if abs(bareiss_determinant(witness)) != best:
        raise InvariantViolation(f"witness determinant disagrees with search value {best}")
    return best, tuple(map(tuple, witness))


def maxdet01_bruteforce(n: int, return_witness: bool = False):
    """Exact ``h_n`` by exhaustive search over 0/1 matrices, ``1 <= n <= 6``."""
    if n < 1:
        raise InvalidParameterError("n must be at least 1")
    if n > MAX_BRUTEFORCE_N:
        raise CapacityError(f"brute force is limited to n <= {MAX_BRUTEFORCE_N}")
    best, witness = _maxdet_cached(n)
    return (best, [list(r) for r in witness]) if return_witness else best


def h_from_hadamard_equality(n: int, H: HadamardMatrix | None = None) -> int:
    """``h_n = (n+1)^((n+1)/2) / 2^n`` when an order-(n+1) Hadamard matrix exists.

    ``H`` is the certificate; if omitted, a built-in construction is tried.
    """
    m = n + 1
    if H is None:
        H = constructible(m)
        if H is None:
            raise InvalidParameterError(f"no Hadamard matrix of order {m} available")
    if H.order != m or not verify(H):
        raise InvariantViolation(f"certificate is not a Hadamard matrix of order {m}")
    if m % 2:
        raise InvariantViolation(f"odd order {m} cannot certify the equality case")
    num = m ** (m // 2)
    if num % (1 << n):
        raise InvariantViolation(f"{m}^{m // 2} is not divisible by 2^{n}")
    return num >> n


def h_from_witness(matrix) -> int:
    """``|det|`` of a user-supplied 0/1 matrix: a certified lower bound for ``h_n``."""
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or not np.all((a == 0) | (a == 1)):
        raise InvalidParameterError("witness must be a square 0/1 matrix")
    return abs(int(bareiss_determinant(a.tolist())))


def hadamard_bound(n: int) -> float:
    return (n + 1) ** ((n + 1) / 2) / 2**n


def barba_bound(n: int) -> float:
    if n % 2:
        raise InvalidParameterError("the Barba bound applies to even n only")
    return n ** (n / 2) * sqrt(2 * n + 1) / 2**n


def within_hadamard_bound(h: int, n: int) -> bool:
    """``h <= (n+1)^((n+1)/2) / 2^n`` compared as ``4^n h^2 <= (n+1)^(n+1)``."""
    return 4**n * h * h <= (n + 1) ** (n + 1)


def attains_hadamard_bound(h: int, n: int) -> bool:
    return 4**n * h * h == (n + 1) ** (n + 1)


def within_barba_bound(h: int, n: int) -> bool:
    if n % 2:
        raise InvalidParameterError("the Barba bound applies to even n only")
    return 4**n * h * h <= n**n * (2 * n + 1)


def attains_barba_bound(h: int, n: int) -> bool:
    if n % 2:
        raise InvalidParameterError("the Barba bound applies to even n only")
    return 4**n * h * h == n**n * (2 * n + 1)


def maxvol_norm_bound(h_n: int, h_n1: int) -> Fraction:
    """``2 h_{n+1} / h_n + 1``: bounds the projector norm of a maximal-volume simplex."""
    if h_n < 1:
        raise InvalidParameterError("h_n must be positive")
    return Fraction(2 * h_n1, h_n) + 1


def barba_norm_bound(n: int) -> float:
    return sqrt(2 * n + 3) + 1


def sqrt_norm_bound(n: int) -> float:
    return sqrt(n + 1)


def theta_lower(n: int) -> float:
    if n < 1:
        raise InvalidParameterError("n must be at least 1")
    return sqrt(n - 1) / e


def barba_norm_bound_from_h(n: int) -> float:
    """Max-volume norm bound with ``h_n`` at the Hadamard equality and ``h_{n+1}`` at Barba's bound."""
    m = n + 1
    h_n = m ** (m / 2) / 2**n
    h_n1 = m ** (m / 2) * sqrt(2 * n + 3) / 2 ** (n + 1)
    return 2 * h_n1 / h_n + 1


def h_ratio_bounds(h_n: int, h_n1: int, n: int):
    """``(h_{n+1}/h_n, nu_{n+1}/nu_n)``; checks the explicit lower bound on the first."""
    ratio = Fraction(h_n1, h_n)
    nu_ratio = Fraction(h_n1, (n + 1) * h_n)
    floor = sqrt(n - 1) / (2 * e) - 0.5
    if not float(ratio) > floor:
        raise InvariantViolation(f"h_(n+1)/h_n = {ratio} is not above {floor}")
    return ratio, nu_ratio


def certified_h(n: int, brute_force_max: int = 5):
    """``(h_n, provenance)`` or ``(None, BOUND_ONLY)`` when no certificate exists."""
    if n <= brute_force_max:
        return maxdet01_bruteforce(n), BRUTEFORCE
    if constructible(n + 1) is not None and (n + 1) % 2 == 0:
        return h_from_hadamard_equality(n), HADAMARD_EQUALITY
    return None, BOUND_ONLY


@dataclass(frozen=True)
class BoundsRow:
    n: int
    h_n: int | None
    nu_n: Fraction | None
    hadamard_bound: float
    barba_bound: float | None
    maxvol_norm_bound: Fraction | None
    barba_norm_bound: float
    sqrt_norm_bound: float
    theta_lower: float
    provenance: dict = field(default_factory=dict)


def bounds_row(n: int, brute_force_max: int = 5) -> BoundsRow:
    h_n, prov_n = certified_h(n, brute_force_max)
    h_n1, prov_n1 = certified_h(n + 1, brute_force_max)
    provenance = {"h_n": prov_n, "h_n1": prov_n1}
    if h_n is not None:
        if not within_hadamard_bound(h_n, n):
            raise InvariantViolation(f"h_{n} = {h_n} exceeds the Hadamard bound")
        if n % 2 == 0 and not within_barba_bound(h_n, n):
            raise InvariantViolation(f"h_{n} = {h_n} exceeds the Barba bound")
        if constructible(n + 1) is not None and (n + 1) % 2 == 0:
            if h_n != h_from_hadamard_equality(n):
                raise InvariantViolation(f"h_{n} disagrees with the Hadamard equality case")
    t1 = maxvol_norm_bound(h_n, h_n1) if h_n is not None and h_n1 is not None else None
    provenance["maxvol_norm_bound"] = BOUND_ONLY if t1 is None else "exact"
    return BoundsRow(
        n=n,
        h_n=h_n,
        nu_n=Fraction(h_n, factorial(n)) if h_n is not None else None,
        hadamard_bound=hadamard_bound(n),
        barba_bound=barba_bound(n) if n % 2 == 0 else None,
        maxvol_norm_bound=t1,
        barba_norm_bound=barba_norm_bound(n),
        sqrt_norm_bound=sqrt_norm_bound(n),
        theta_lower=theta_lower(n),
        provenance=provenance,
    )
