"""Projector norm for a regular simplex inscribed in a Euclidean ball.

The norm depends on the dimension only and equals ``max(psi(a), psi(a+1))``
with ``a = floor((n+1)/2 - sqrt(n+1)/2)``.  Values are binary64; the only
exact claims (perfect-square ``n+1``) are decided with integer square roots.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, sqrt

import numpy as np

from .cube_norm import NormReport

TOL = 1e-9


@dataclass(frozen=True)
class BallNormResult:
    n: int
    a: int
    psi_a: float
    psi_a1: float
    norm: float
    exact_sqrt_flag: bool


def psi(t: float, n: int) -> float:
    if not 0 <= t <= n + 1:
        raise ValueError(f"t = {t} outside [0, {n + 1}]")
    m = n + 1
    return 2 * sqrt(n) / m * sqrt(t * (m - t)) + abs(1 - 2 * t / m)


def is_perfect_square(k: int) -> bool:
    return k >= 0 and isqrt(k) ** 2 == k


def split_point(n: int) -> int:
    """``floor((n+1)/2 - sqrt(n+1)/2)``, exact for every n.

    ``a`` is the largest integer with ``(n+1) - 2a >= sqrt(n+1)``, i.e.
    ``n+1-2a >= 0`` and ``(n+1-2a)**2 >= n+1``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    m = n + 1
    a = int((m - sqrt(m)) // 2)

    def ok(c):
        return m - 2 * c >= 0 and (m - 2 * c) ** 2 >= m

    while not ok(a):
        a -= 1
    while ok(a + 1):
        a += 1
    return a


def psi_equals_sqrt_exactly(t: int, n: int) -> bool:
    """Decide ``psi(t) == sqrt(n+1)`` exactly for integer ``t``.

    With ``u = |1 - 2t/m|`` rational, squaring ``2 sqrt(n t (m-t)) / m = sqrt(m) - u``
    leaves ``sqrt(m)`` in a rational identity unless ``u = 0``, and ``u = 0``
    would need ``n = m``.  So equality forces ``m = s**2``, after which the
    check is the rational identity ``4 n t (m-t) = m**2 (s-u)**2`` with ``s >= u``.
    """
    m = n + 1
    if not is_perfect_square(m):
        return False
    s = isqrt(m)
    u = abs(Fraction(m - 2 * t, m))
    return s >= u and 4 * n * t * (m - t) == m * m * (s - u) ** 2


def ball_norm_is_sqrt_exactly(n: int) -> bool:
    a = split_point(n)
    return psi_equals_sqrt_exactly(a, n) or psi_equals_sqrt_exactly(a + 1, n)


def ball_projector_norm(n: int) -> BallNormResult:
    a = split_point(n)
    pa = psi(a, n)
    pa1 = psi(a + 1, n)
    return BallNormResult(n, a, pa, pa1, max(pa, pa1), is_perfect_square(n + 1))


def ball_norm_sweep(nmax: int) -> dict:
    """Vectorised norms for ``n = 1..nmax`` with the split points and square flags."""
    n = np.arange(1, nmax + 1)
    a = np.array([split_point(int(k)) for k in n])
    m = n + 1.0

    def vpsi(t):
        return 2 * np.sqrt(n) / m * np.sqrt(t * (m - t)) + np.abs(1 - 2 * t / m)

    norm = np.maximum(vpsi(a), vpsi(a + 1))
    squares = np.array([is_perfect_square(int(k) + 1) for k in n])
    return {"n": n, "a": a, "norm": norm, "perfect_square": squares}


def cube_ball_consistency(report: NormReport) -> bool:
    """Cube norm of a Hadamard simplex cannot exceed its circumscribed-ball norm."""
    return float(report.norm) <= ball_projector_norm(report.dimension).norm + TOL
