"""JSON reports, run manifests, batch ingestion and the reproduction targets.

Exact rationals are written as ``"p/q"`` strings in lowest terms.  Report
bytes depend only on the inputs: timings live in the manifest unless a caller
asks for them explicitly.
"""
from __future__ import annotations

import datetime
import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .absorption import AbsorptionReport, check_xi_inequalities, xi_from_report
from .ball import (
    TOL,
    ball_norm_is_sqrt_exactly,
    ball_norm_sweep,
    ball_projector_norm,
    cube_ball_consistency,
    is_perfect_square,
)
from .bounds import (
    BoundsRow,
    attains_barba_bound,
    attains_hadamard_bound,
    bounds_row,
    h_ratio_bounds,
    barba_norm_bound,
    barba_norm_bound_from_h,
    h_from_hadamard_equality,
    maxdet01_bruteforce,
    maxvol_norm_bound,
    theta_lower,
)
from .cube_norm import NormReport, hadamard_fast_path, projector_norm, verify_sqrt_bound
from .errors import HadsimplexError, InvariantViolation
from .geometry import build_evaluator, simplex_from_hadamard
from .hadamard import normalize_last_column, paley_I, read_matrix, sylvester, verify

# (norm, census) rows for the five classes of order 16
ORDER16_TABLE = (
    (Fraction(4), {6: 448}),
    (Fraction(4), {6: 192}),
    (Fraction(4), {6: 64}),
    (Fraction(7, 2), {4: 896, 5: 1344, 6: 5376, 8: 1344}),
    (Fraction(7, 2), {4: 896, 5: 1344, 6: 5376, 8: 1344}),
)
ORDER24_NORMS = (Fraction(14, 3), Fraction(9, 2))

TARGETS = ("n3", "n15-sylvester", "n23-paley", "ball-sweep", "bounds-table")


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s: str) -> Fraction:
    return Fraction(s)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> None:
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj), encoding="utf-8")


def norm_report_json(report: NormReport, timing: bool = False) -> dict:
    out = {
        "n": report.dimension,
        "norm": frac_str(report.norm),
        "norm_decimal": f"{float(report.norm):.12g}",
        "mu_census": {str(mu): c for mu, c in report.census.items()},
        "maximizer_count": report.maximizer_count,
    }
    bits = report.maximizer_bits()
    if report.complete:
        out["maximizers"] = bits
    else:
        out["maximizer_sample"] = bits
    if timing:
        out["elapsed_ms"] = round(report.elapsed * 1000, 3)
    return out


def absorption_json(rep: AbsorptionReport) -> dict:
    return {
        "xi": frac_str(rep.xi),
        "lower": frac_str(rep.lower),
        "upper": frac_str(rep.upper),
        "tight_right": rep.tight_right,
        "has_one_vertex": rep.has_one_vertex,
        "mu_bounds": {str(mu): frac_str(b) for mu, b in rep.mu_lower_bounds.items()},
    }


def ball_json(res) -> dict:
    return {
        "n": res.n,
        "a": res.a,
        "psi_a": res.psi_a,
        "psi_a1": res.psi_a1,
        "norm": res.norm,
        "is_perfect_square": res.exact_sqrt_flag,
    }


def bounds_json(row: BoundsRow) -> dict:
    return {
        "n": row.n,
        "h_n": row.h_n,
        "nu_n": frac_str(row.nu_n) if row.nu_n is not None else None,
        "hadamard_bound": row.hadamard_bound,
        "barba_bound": row.barba_bound,
        "maxvol_norm_bound": frac_str(row.maxvol_norm_bound) if row.maxvol_norm_bound is not None else None,
        "barba_norm_bound": row.barba_norm_bound,
        "sqrt_norm_bound": row.sqrt_norm_bound,
        "theta_lower": row.theta_lower,
        "provenance": dict(row.provenance),
    }


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


@dataclass
class RunManifest:
    command: list
    inputs: dict
    version: str = __version__
    workers: int = 1
    timestamp: str = ""
    outputs: list = field(default_factory=list)
    timings_ms: dict = field(default_factory=dict)

    @classmethod
    def start(cls, argv, input_paths=(), workers=1) -> "RunManifest":
        inputs = {str(p): sha256_file(p) for p in sorted(map(str, input_paths))}
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        return cls(list(argv), inputs, __version__, workers, stamp)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "version": self.version,
            "workers": self.workers,
            "timestamp": self.timestamp,
            "outputs": sorted(self.outputs),
            "timings_ms": self.timings_ms,
        }


# -- analysis of a single matrix -------------------------------------------------


def analyze_matrix(H, workers: int = 1, cross_check: bool = False):
    """Norm report and absorption report for the simplex of a Hadamard matrix.

    Rows are negated as needed so the last column is all ones.  With
    ``cross_check`` the generic rational scan must reproduce the fast one.
    """
    if not verify(H):
        raise InvariantViolation("matrix is not Hadamard")
    Hn = normalize_last_column(H)
    rep = hadamard_fast_path(Hn, workers=workers)
    if cross_check:
        ev = build_evaluator(simplex_from_hadamard(Hn))
        generic = projector_norm(ev, workers=workers)
        if generic != rep:
            raise InvariantViolation("generic and Gray-code scans disagree")
    absorb = check_xi_inequalities(rep, xi_from_report(rep)) if rep.dimension >= 1 else None
    return rep, absorb


def census_key(census: dict) -> tuple:
    return tuple(sorted(census.items()))


def ingest(directory, workers: int = 1) -> dict:
    """Analyze every matrix file in ``directory``; per-file failures are collected."""
    directory = Path(directory)
    rows, errors = [], []
    for path in sorted(p for p in directory.iterdir() if p.is_file()):
        try:
            H = read_matrix(path)
            if not verify(H):
                raise InvariantViolation("matrix is not Hadamard")
            rep, absorb = analyze_matrix(H, workers=workers)
        except (HadsimplexError, OSError, UnicodeDecodeError) as exc:
            errors.append({"file": path.name, "error": f"{type(exc).__name__}: {exc}"})
            continue
        rows.append((path.name, rep, absorb))
    rows.sort(key=lambda r: (r[1].dimension, r[1].norm, census_key(r[1].census), r[0]))
    summary = []
    for name, rep, absorb in rows:
        entry = {"file": name, **norm_report_json(rep)}
        entry.pop("maximizers", None)
        entry.pop("maximizer_sample", None)
        if absorb is not None:
            entry["absorption"] = absorption_json(absorb)
        summary.append(entry)
    return {"summary": summary, "errors": errors}


def table_multiset(rows) -> list:
    return sorted((Fraction(norm), census_key(c)) for norm, c in rows)


# -- reproduction targets ------------------------------------------------------------


class _Checks:
    def __init__(self):
        self.items = []

    def add(self, name: str, ok: bool, detail: str = ""):
        self.items.append({"check": name, "passed": bool(ok), "detail": detail})

    def guard(self, name: str, fn):
        try:
            fn()
        except InvariantViolation as exc:
            self.add(name, False, str(exc))
        else:
            self.add(name, True)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.items)


def _hadamard_target(H, checks: _Checks, workers: int, cross_check: bool):
    rep, absorb = None, None

    def run():
        nonlocal rep, absorb
        rep, absorb = analyze_matrix(H, workers=workers, cross_check=cross_check)

    checks.guard("scan and absorption inequalities", run)
    if rep is None:
        return None, None
    n = rep.dimension
    checks.add("norm^2 <= n+1", verify_sqrt_bound(rep), f"{frac_str(rep.norm ** 2)} <= {n + 1}")
    ball = ball_projector_norm(n)
    checks.add("cube norm <= ball norm", cube_ball_consistency(rep), f"{float(rep.norm)} <= {ball.norm}")
    checks.add("norm <= sqrt(2n+3)+1", float(rep.norm) <= barba_norm_bound(n) + TOL)
    checks.add("norm > sqrt(n-1)/e", float(rep.norm) > theta_lower(n))
    return rep, absorb


def _target_n3(workers, checks, **_):
    rep, absorb = _hadamard_target(sylvester(2), checks, workers, cross_check=True)
    if rep is None:
        return {}
    checks.add("norm == 2", rep.norm == 2, frac_str(rep.norm))
    checks.add("census == {1: 4}", rep.census == {1: 4}, str(rep.census))
    checks.add("xi == 3", absorb.xi == 3, frac_str(absorb.xi))
    checks.add("right-hand equality with a 1-vertex", absorb.tight_right and absorb.has_one_vertex)
    t1 = maxvol_norm_bound(maxdet01_bruteforce(3), maxdet01_bruteforce(4))
    checks.add("max-volume bound 4 dominates the norm", t1 == 4 and rep.norm <= t1, frac_str(t1))
    return {"norm": norm_report_json(rep), "absorption": absorption_json(absorb), "maxvol_norm_bound": frac_str(t1)}


def _target_n15(workers, checks, matrix_dir=None, **_):
    rep, absorb = _hadamard_target(sylvester(4), checks, workers, cross_check=True)
    if rep is None:
        return {}
    ok = any(rep.norm == norm and rep.census == c for norm, c in ORDER16_TABLE)
    checks.add("(norm, census) is a row of the order-16 table", ok, f"{frac_str(rep.norm)} {rep.census}")
    out = {"norm": norm_report_json(rep), "absorption": absorption_json(absorb)}
    if matrix_dir is not None:
        batch = ingest(matrix_dir, workers=workers)
        found = [
            (parse_frac(r["norm"]), {int(k): v for k, v in r["mu_census"].items()})
            for r in batch["summary"]
            if r["n"] == 15
        ]
        checks.add("matrix directory parsed without errors", not batch["errors"], str(batch["errors"]))
        checks.add(
            "order-16 rows equal the table multiset",
            table_multiset(found) == table_multiset(ORDER16_TABLE),
            f"{len(found)} order-16 matrices",
        )
        out["batch"] = batch
    return out


def _target_n23(workers, checks, **_):
    rep, absorb = _hadamard_target(paley_I(23), checks, workers, cross_check=False)
    if rep is None:
        return {}
    checks.add("norm in {14/3, 9/2}", rep.norm in ORDER24_NORMS, frac_str(rep.norm))
    return {"norm": norm_report_json(rep), "absorption": absorption_json(absorb)}


def _target_ball(workers, checks, nmax=10000, **_):
    expected = {1: 1.0, 2: 5 / 3, 3: 2.0, 15: 4.0}
    for n, v in expected.items():
        got = ball_projector_norm(n).norm
        checks.add(f"ball norm n={n}", abs(got - v) <= TOL, f"{got!r} vs {v!r}")
    sw = ball_norm_sweep(nmax)
    lo = sw["norm"] >= (sw["n"] ** 0.5) - TOL
    hi = sw["norm"] <= ((sw["n"] + 1) ** 0.5) + TOL
    checks.add(f"sqrt(n) <= norm <= sqrt(n+1) for n <= {nmax}", bool(lo.all() and hi.all()))
    at_top = abs(sw["norm"] - (sw["n"] + 1) ** 0.5) <= TOL
    spurious = sw["n"][at_top & ~sw["perfect_square"]].tolist()
    checks.add(
        "norm within 1e-9 of sqrt(n+1) exactly when n+1 is a square",
        bool((at_top == sw["perfect_square"]).all()),
        f"{int(at_top.sum())} cases within tolerance; non-square ones: {spurious[:6]}"
        + (f" ... ({len(spurious)} total)" if len(spurious) > 6 else ""),
    )
    exact = [n for n in range(1, nmax + 1) if ball_norm_is_sqrt_exactly(n)]
    checks.add(
        "norm == sqrt(n+1) in exact arithmetic exactly when n+1 is a square",
        exact == [n for n in range(1, nmax + 1) if is_perfect_square(n + 1)],
        f"{len(exact)} exact equality cases",
    )
    at_bottom = abs(sw["norm"] - sw["n"] ** 0.5) <= TOL
    checks.add("norm == sqrt(n) only at n = 1", sw["n"][at_bottom].tolist() == [1])
    rows = [ball_json(ball_projector_norm(n)) for n in (1, 2, 3, 7, 8, 15, 23, 24)]
    return {"sweep_max": nmax, "exact_equality_dimensions": exact, "rows": rows}


def _target_bounds(workers, checks, **_):
    hs = {n: maxdet01_bruteforce(n) for n in range(1, 6)}
    checks.add("h_1..h_5 == 1, 1, 2, 3, 5", [hs[n] for n in range(1, 6)] == [1, 1, 2, 3, 5], str(hs))
    checks.add("h_3 equals the Hadamard-equality value 2", hs[3] == h_from_hadamard_equality(3) == 2)
    checks.add("h_3 attains the Hadamard bound", attains_hadamard_bound(hs[3], 3))
    checks.add("h_4 attains the Barba bound 3", attains_barba_bound(hs[4], 4) and hs[4] == 3)
    checks.add("max-volume bound at n=3 is 4", maxvol_norm_bound(hs[3], hs[4]) == 4)
    for n in range(1, 5):
        checks.guard(f"explicit h-ratio bound n={n}", lambda n=n: h_ratio_bounds(hs[n], hs[n + 1], n))
    for n in (3, 7, 11, 15, 23):
        v = barba_norm_bound_from_h(n)
        checks.add(f"max-volume bound with Barba gives sqrt(2n+3)+1 at n={n}", abs(v - barba_norm_bound(n)) <= TOL)
    rows = []
    for n in (1, 2, 3, 4, 7, 11, 15, 19, 23):
        row = bounds_row(n)
        rows.append(bounds_json(row))
    return {"rows": rows}


_TARGET_FUNCS = {
    "n3": _target_n3,
    "n15-sylvester": _target_n15,
    "n23-paley": _target_n23,
    "ball-sweep": _target_ball,
    "bounds-table": _target_bounds,
}


def reproduce(target: str, workers: int = 1, matrix_dir=None) -> dict:
    """Run one target; the returned dict carries ``passed`` and the list of checks."""
    if target not in _TARGET_FUNCS:
        raise ValueError(f"unknown target {target!r}; choose from {', '.join(TARGETS)}")
    checks = _Checks()
    try:
        body = _TARGET_FUNCS[target](workers=workers, checks=checks, matrix_dir=matrix_dir)
    except InvariantViolation as exc:
        checks.add("target completed", False, str(exc))
        body = {}
    return {"target": target, "passed": checks.passed, "checks": checks.items, **body}


def default_output_name(target: str) -> str:
    return f"reproduce_{target}.json"
