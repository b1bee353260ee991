"""Command-line front end.

Exit codes: 0 success, 1 a checked inequality or identity failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .absorption import check_xi_inequalities, xi_from_report
from .ball import ball_norm_sweep, ball_projector_norm
from .bounds import bounds_row, h_from_hadamard_equality, maxdet01_bruteforce
from .cube_norm import DEFAULT_MAXIMIZER_CAP, hadamard_fast_path, projector_norm
from .errors import HadsimplexError, InvariantViolation, MalformedMatrixError
from .geometry import Cube, Simplex, build_evaluator, simplex_from_hadamard
from .hadamard import generate, normalize_last_column, read_matrix, serialize_matrix, verify
from .report import (
    TARGETS,
    RunManifest,
    absorption_json,
    ball_json,
    bounds_json,
    default_output_name,
    dumps,
    frac_str,
    ingest,
    norm_report_json,
    reproduce,
    write_json,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _emit(args, obj, text=None):
    if getattr(args, "json", None):
        write_json(args.json, obj)
    print(text if text is not None else dumps(obj), end="" if text is None else "\n")


def _load_hadamard(path):
    H = read_matrix(path)
    if not verify(H):
        raise MalformedMatrixError(f"{path}: matrix is not Hadamard")
    return H


# -- hadamard ------------------------------------------------------------------


def cmd_hadamard_gen(args):
    H = generate(args.order, args.method)
    text = serialize_matrix(H)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.json:
        write_json(args.json, {"order": H.order, "method": args.method, "verified": verify(H)})
    return EXIT_OK


def cmd_hadamard_verify(args):
    H = read_matrix(args.file)
    ok = verify(H)
    _emit(args, {"file": str(args.file), "order": H.order, "verified": ok},
          f"{args.file}: order {H.order}, {'Hadamard' if ok else 'NOT Hadamard'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_hadamard_normalize(args):
    H = _load_hadamard(args.file)
    Hn = normalize_last_column(H)
    text = serialize_matrix(Hn)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.json:
        negated = [i + 1 for i, r in enumerate(H.rows) if r[-1] == -1]
        write_json(args.json, {"order": H.order, "negated_rows": negated})
    return EXIT_OK


# -- norm / absorb -------------------------------------------------------------------


def _norm_report(args):
    H = normalize_last_column(_load_hadamard(args.matrix))
    if args.cube == "unit" or args.generic:
        S = simplex_from_hadamard(H)
        ev = build_evaluator(S)
        if args.cube == "unit":
            # same configuration expressed in [0, 1]^n coordinates
            n = S.dimension
            half = Fraction(1, 2)
            S = Simplex(tuple(tuple((v + 1) * half for v in x) for x in S.vertices))
            ev = build_evaluator(S)
            return projector_norm(ev, Cube.unit(n), workers=args.workers, cap=args.cap)
        return projector_norm(ev, workers=args.workers, cap=args.cap)
    return hadamard_fast_path(H, workers=args.workers, cap=args.cap)


def cmd_norm(args):
    rep = _norm_report(args)
    obj = norm_report_json(rep, timing=True)
    lines = [f"n = {rep.dimension}", f"norm = {frac_str(rep.norm)} ({obj['norm_decimal']})",
             f"maximizers = {rep.maximizer_count}"]
    if args.census:
        lines.append("census: " + ", ".join(f"m_{mu} = {c}" for mu, c in rep.census.items()))
    _emit(args, obj, "\n".join(lines))
    return EXIT_OK


def cmd_absorb(args):
    H = normalize_last_column(_load_hadamard(args.matrix))
    rep = hadamard_fast_path(H, workers=args.workers, cap=0)
    absorb = check_xi_inequalities(rep, xi_from_report(rep))
    obj = absorption_json(absorb)
    _emit(args, obj, f"xi = {obj['xi']}, bounds [{obj['lower']}, {obj['upper']}], "
                     f"tight_right = {obj['tight_right']}")
    return EXIT_OK


# -- ball / bounds ---------------------------------------------------------------------


def cmd_ball_norm(args):
    if args.sweep:
        sw = ball_norm_sweep(args.sweep)
        n, norm = sw["n"], sw["norm"]
        lo_ok = bool((norm >= n**0.5 - 1e-9).all())
        hi_ok = bool((norm <= (n + 1) ** 0.5 + 1e-9).all())
        top = abs(norm - (n + 1) ** 0.5) <= 1e-9
        square_ok = bool((top == sw["perfect_square"]).all())
        obj = {"sweep_max": args.sweep, "lower_ok": lo_ok, "upper_ok": hi_ok,
               "equality_iff_square": square_ok, "equality_dimensions": n[top].tolist()}
        _emit(args, obj)
        return EXIT_OK if lo_ok and hi_ok and square_ok else EXIT_FAIL
    _emit(args, ball_json(ball_projector_norm(args.n)))
    return EXIT_OK


def cmd_maxdet(args):
    if args.brute_force:
        h, witness = maxdet01_bruteforce(args.n, return_witness=True)
        obj = {"n": args.n, "h_n": h, "provenance": "bruteforce", "witness": witness}
    else:
        obj = {"n": args.n, "h_n": h_from_hadamard_equality(args.n), "provenance": "hadamard-equality"}
    _emit(args, obj)
    return EXIT_OK


def cmd_bounds(args):
    _emit(args, bounds_json(bounds_row(args.n, brute_force_max=args.brute_force_max)))
    return EXIT_OK


# -- ingest / reproduce ---------------------------------------------------------------


def cmd_ingest(args):
    result = ingest(args.dir, workers=args.workers)
    _emit(args, result)
    return EXIT_INPUT if result["errors"] else EXIT_OK


def cmd_reproduce(args, argv):
    out_dir = Path(args.out)
    inputs = []
    if args.matrix_dir:
        inputs = sorted(p for p in Path(args.matrix_dir).iterdir() if p.is_file())
    manifest = RunManifest.start(argv, inputs, workers=args.workers)
    targets = TARGETS if args.target == "all" else (args.target,)
    ok = True
    for target in targets:
        t0 = time.perf_counter()
        result = reproduce(target, workers=args.workers, matrix_dir=args.matrix_dir)
        manifest.timings_ms[target] = round((time.perf_counter() - t0) * 1000, 3)
        path = out_dir / default_output_name(target)
        write_json(path, result)
        manifest.outputs.append(str(path))
        status = "PASS" if result["passed"] else "FAIL"
        print(f"{status} {target} -> {path}")
        for c in result["checks"]:
            if not c["passed"]:
                print(f"  failed: {c['check']} {c['detail']}")
        ok = ok and result["passed"]
    write_json(out_dir / "manifest.json", manifest.to_json())
    if args.json:
        write_json(args.json, {"passed": ok, "targets": list(targets)})
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hadsimplex", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def with_json(sp):
        sp.add_argument("--json", metavar="PATH", help="also write the result as JSON")
        return sp

    had = sub.add_parser("hadamard", help="generate, verify or normalize Hadamard matrices")
    hsub = had.add_subparsers(dest="action", required=True)
    g = with_json(hsub.add_parser("gen"))
    g.add_argument("--order", type=int, required=True)
    g.add_argument("--method", choices=["sylvester", "paley"], required=True)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_hadamard_gen)
    v = with_json(hsub.add_parser("verify"))
    v.add_argument("file")
    v.set_defaults(func=cmd_hadamard_verify)
    nz = with_json(hsub.add_parser("normalize"))
    nz.add_argument("file")
    nz.add_argument("-o", "--output")
    nz.set_defaults(func=cmd_hadamard_normalize)

    nm = with_json(sub.add_parser("norm", help="exact projector norm over the cube"))
    nm.add_argument("--matrix", required=True)
    nm.add_argument("--cube", choices=["sym", "unit"], default="sym")
    nm.add_argument("--census", action="store_true", help="print the mu-vertex census")
    nm.add_argument("--workers", type=int, default=1)
    nm.add_argument("--cap", type=int, default=DEFAULT_MAXIMIZER_CAP,
                    help="store at most this many maximizers")
    nm.add_argument("--generic", action="store_true",
                    help="use the general rational scan instead of the Hadamard fast path")
    nm.set_defaults(func=cmd_norm)

    ab = with_json(sub.add_parser("absorb", help="absorption index and its norm bounds"))
    ab.add_argument("--matrix", required=True)
    ab.add_argument("--workers", type=int, default=1)
    ab.set_defaults(func=cmd_absorb)

    bn = with_json(sub.add_parser("ball-norm", help="projector norm of a regular simplex in a ball"))
    bn.add_argument("--n", type=int, default=1)
    bn.add_argument("--sweep", type=int, metavar="MAX")
    bn.set_defaults(func=cmd_ball_norm)

    md = with_json(sub.add_parser("maxdet", help="maximal determinant of a 0/1 matrix"))
    md.add_argument("--n", type=int, required=True)
    md.add_argument("--brute-force", action="store_true")
    md.set_defaults(func=cmd_maxdet)

    bd = with_json(sub.add_parser("bounds", help="h_n and the bounds derived from it"))
    bd.add_argument("--n", type=int, required=True)
    bd.add_argument("--brute-force-max", type=int, default=5)
    bd.set_defaults(func=cmd_bounds)

    ig = with_json(sub.add_parser("ingest", help="analyze a directory of matrix files"))
    ig.add_argument("dir")
    ig.add_argument("--workers", type=int, default=1)
    ig.set_defaults(func=cmd_ingest)

    rp = with_json(sub.add_parser("reproduce", help="run a reproduction target"))
    rp.add_argument("target", choices=TARGETS + ("all",))
    rp.add_argument("--out", default="reports")
    rp.add_argument("--workers", type=int, default=1)
    rp.add_argument("--matrix-dir", help="order-16 class representatives for the full table")
    rp.set_defaults(func=None)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.command == "reproduce":
            return cmd_reproduce(args, ["hadsimplex", *argv])
        return args.func(args)
    except InvariantViolation as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (HadsimplexError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
