"""Absorption index of a cube by a simplex and its two-sided norm estimate.

A point lies in the homothet ``sigma*S`` about the centroid iff all of its
barycentric coordinates are at least ``(1 - sigma)/(n+1)``.  Since the cube is
the convex hull of its vertices,

    xi = max(1, 1 - (n+1) * min_{j, vertex x} lambda_j(x)),

which comes out of the same vertex scan as the projector norm.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cube_norm import NormReport, projector_norm
from .errors import InvariantViolation
from .geometry import Cube, LagrangeEvaluator


@dataclass(frozen=True)
class AbsorptionReport:
    xi: Fraction
    lower: Fraction
    upper: Fraction
    mu_lower_bounds: dict
    has_one_vertex: bool

    @property
    def tight_right(self) -> bool:
        return self.xi == self.upper


def xi_from_report(report: NormReport) -> Fraction:
    return max(Fraction(1), 1 - (report.dimension + 1) * report.min_lambda)


def absorption_index(ev: LagrangeEvaluator, cube: Cube | None = None, workers: int = 1) -> Fraction:
    return xi_from_report(projector_norm(ev, cube, workers=workers, cap=0))


def norm_bounds(norm: Fraction, n: int, mu: int | None = None) -> Fraction:
    """``(n+1)/(2*mu) * (norm - 1) + 1``; ``mu=None`` means ``mu = n``."""
    mu = n if mu is None else mu
    return Fraction(n + 1, 2 * mu) * (norm - 1) + 1


def check_xi_inequalities(report: NormReport, xi: Fraction) -> AbsorptionReport:
    """Check the inequalities tying ``xi`` to the projector norm.

    * ``(n+1)/(2n) (|P|-1) + 1 <= xi <= (n+1)/2 (|P|-1) + 1``
    * the right side is attained iff a 1-vertex exists
    * ``(n+1)/(2 mu) (|P|-1) + 1 <= xi`` for every mu with a mu-vertex

    Raises InvariantViolation naming the first inequality that fails.
    """
    n = report.dimension
    if n < 1:
        raise ValueError("absorption bounds need n >= 1")
    norm = report.norm
    lower = norm_bounds(norm, n)
    upper = norm_bounds(norm, n, 1)
    if xi < 1:
        raise InvariantViolation(f"xi = {xi} < 1")
    if not lower <= xi:
        raise InvariantViolation(f"lower bound violated: {lower} > xi = {xi}")
    if not xi <= upper:
        raise InvariantViolation(f"upper bound violated: xi = {xi} > {upper}")
    if norm > 1:
        mus = [mu for mu in report.census if mu >= 1]
    else:
        mus = []
    mu_bounds = {mu: norm_bounds(norm, n, mu) for mu in mus}
    for mu, b in mu_bounds.items():
        if not b <= xi:
            raise InvariantViolation(f"mu={mu} bound violated: {b} > xi = {xi}")
    has_one = 1 in report.census
    if norm > 1 and (xi == upper) != has_one:
        raise InvariantViolation(
            f"right-hand equality is {xi == upper} but 1-vertex presence is {has_one}"
        )
    return AbsorptionReport(xi, lower, upper, mu_bounds, has_one)
