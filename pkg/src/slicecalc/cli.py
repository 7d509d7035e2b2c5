"""Command-line entry point: ``python -m slicecalc <command> ...``.

Commands
--------
verify   run named verification suites; exit 1 if any report misses its expectation
expand   print the exact coordinate expansion of an operator applied to x^m
eval     apply an operator to a serialized polynomial slice function at a point
zonal    CSV table of zonal harmonics with the Gegenbauer cross-check
poisson  partial sums of the zonal expansion of the Poisson kernel

Exit codes: 0 success, 1 a verification failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from . import harmonics as hm
from .clifford import CliffordError
from .polycalc import (
    CoordPoly,
    expand_power,
    expand_slice,
    spherical_derivative_poly,
    spherical_value_poly,
)
from .quat import QUAT_BASIS, QUAT_NAMES, quat_str
from .slicefn import PolynomialSlice
from .suites import SUITES, SuiteConfig, run_suite

SEED_ENV = "SLICECALC_SEED"
# suites whose content changes with --n; the others are fixed to R_3 / H / R_5
N_DEPENDENT = {"teo2", "cor1", "laplacian", "vs", "cor_n_odd"}
DEFAULT_SEED = 42

POLY_OPS = {
    "value": lambda p: p,
    "dbar": CoordPoly.apply_cr,
    "d": CoordPoly.apply_cr_conj,
    "laplacian": CoordPoly.laplacian,
    "gamma": CoordPoly.apply_gamma,
    "lb": CoordPoly.apply_laplace_beltrami,
}
EXPAND_OPS = ("power", "sd", "sv") + tuple(k for k in POLY_OPS if k != "value")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="slicecalc", description="Slice-function calculus on Clifford algebras and quaternions.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--n", type=int, nargs="+", default=[3], help="signature size(s) (default 3)")
    v.add_argument("--seed", type=int, default=None,
                   help=f"sampling seed (default ${SEED_ENV} or {DEFAULT_SEED})")
    v.add_argument("--samples", type=int, default=200)
    v.add_argument("--tol", type=float, default=1e-5)
    v.add_argument("--h", type=float, default=1e-4, help="first-difference step")
    v.add_argument("--suite", nargs="+", default=None, metavar="NAME",
                   help=f"suites to run (default all): {', '.join(SUITES)}")
    v.add_argument("--output", choices=("json", "csv", "text"), default="json")
    v.add_argument("--detail", action="store_true", help="include per-sample residuals in JSON")

    e = sub.add_parser("expand", help="exact expansion of an operator applied to x^m")
    e.add_argument("--n", type=int, default=None, help="signature size (default 3)")
    e.add_argument("--power", "-m", type=int, required=True)
    e.add_argument("--op", choices=EXPAND_OPS, default="power")
    e.add_argument("--iter", type=int, default=1, help="apply the operator this many times")
    e.add_argument("--quaternion", action="store_true", help="use x = x0 + x1 i + x2 j + x3 k")
    e.add_argument("--no-factor", action="store_true", help="do not pull out the common factor")

    ev = sub.add_parser("eval", help="apply an operator to a polynomial given as JSON")
    ev.add_argument("--poly", required=True,
                    help='JSON text or @file: {"n": 3, "coeffs": [[[blade, num, den], ...], ...]}')
    ev.add_argument("--op", choices=tuple(POLY_OPS), default="value")
    ev.add_argument("--iter", type=int, default=1)
    ev.add_argument("--at", type=_fraction, nargs="+", required=True, help="point coordinates")
    ev.add_argument("--quaternion", action="store_true")
    ev.add_argument("--output", choices=("json", "text"), default="text")

    z = sub.add_parser("zonal", help="zonal harmonic table (CSV)")
    z.add_argument("--m", type=int, default=5, help="maximum degree")
    z.add_argument("--x", type=float, nargs=4, default=None)
    z.add_argument("--a", type=float, nargs=4, default=[1.0, 0.0, 0.0, 0.0])
    z.add_argument("--samples", type=int, default=3, help="random unit-sphere points if --x is absent")
    z.add_argument("--seed", type=int, default=None)
    z.add_argument("--quaternion", action="store_true")

    po = sub.add_parser("poisson", help="Poisson kernel partial sums (CSV)")
    po.add_argument("--x", type=float, nargs=4, default=[0.5, 0.0, 0.0, 0.0])
    po.add_argument("--a", type=float, nargs=4, default=[1.0, 0.0, 0.0, 0.0])
    po.add_argument("--M", type=int, default=60)
    po.add_argument("--quaternion", action="store_true")
    return p


def _seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV)
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None


# -- verify --------------------------------------------------------------------------

def _verify(args, out) -> int:
    names = args.suite or list(SUITES)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s): {', '.join(unknown)}; known: {', '.join(SUITES)}")
    for n in args.n:
        if not 2 <= n <= 8:
            raise UsageError("--n must lie in 2..8")
    if args.samples < 1 or args.tol <= 0 or args.h <= 0:
        raise UsageError("--samples, --tol and --h must be positive")
    seed = _seed(args.seed)
    results = []
    for name in sorted(set(names)):
        ns = sorted(set(args.n)) if name in N_DEPENDENT else [min(args.n)]
        for n in ns:
            cfg = SuiteConfig(n=n, seed=seed, samples=args.samples, tol=args.tol, h=args.h)
            results.append(run_suite(name, cfg))
    doc = {"version": __version__, "seed": seed, "suites": results}
    if args.detail is False:
        for s in results:
            for r in s["reports"]:
                r.pop("residuals", None)
    ok = all(s["pass"] for s in results)
    if args.output == "json":
        out.write(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    elif args.output == "csv":
        out.write(_verify_csv(results))
    else:
        out.write(_verify_text(results, ok))
    return 0 if ok else 1


_CSV_FIELDS = ("suite", "n", "identity", "samples", "tol", "max_residual", "mean_residual",
               "pass", "expected")


def _verify_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_CSV_FIELDS)
    for s in results:
        for r in s["reports"]:
            w.writerow([s["suite"], r["n"], r["identity"], r["samples"], r["tol"],
                        repr(r["max_residual"]), repr(r["mean_residual"]), r["pass"], r["expected"]])
    return buf.getvalue()


def _verify_text(results, ok) -> str:
    lines = []
    for s in results:
        lines.append(f"[{'PASS' if s['pass'] else 'FAIL'}] {s['suite']} (n={s['n']})")
        for r in s["reports"]:
            status = "ok " if r["pass"] == r["expected"] else "BAD"
            note = "" if r["expected"] else " (expected to fail)"
            lines.append(f"   {status} {r['identity']}: max {r['max_residual']:.3e} "
                         f"over {r['samples']} (tol {r['tol']:g}){note}")
    lines.append("all suites passed" if ok else "some suites FAILED")
    return "\n".join(lines) + "\n"


# -- expand / eval -----------------------------------------------------------------------

def _basis(n: int | None, quaternion: bool):
    if quaternion:
        if n not in (None, 2):
            raise UsageError("quaternions live in R_2; drop --n or use --n 2")
        return 2, QUAT_BASIS, QUAT_NAMES
    return (3 if n is None else n), None, None


def _iterate(op, p: CoordPoly, k: int) -> CoordPoly:
    if k < 0:
        raise UsageError("--iter must be >= 0")
    for _ in range(k):
        p = op(p)
    return p


def _expand(args, out) -> int:
    n, basis, names = _basis(args.n, args.quaternion)
    if not 1 <= n <= 8:
        raise UsageError("--n must lie in 1..8")
    m = args.power
    if m < 0:
        raise UsageError("--power must be >= 0")
    if args.op == "power":
        p = expand_power(m, n, basis)
    elif args.op == "sd":
        if m < 1:
            raise UsageError("--op sd needs --power >= 1")
        p = spherical_derivative_poly(m, n, basis)
    elif args.op == "sv":
        p = spherical_value_poly(m, n, basis)
    else:
        p = _iterate(POLY_OPS[args.op], expand_power(m, n, basis), args.iter)
    out.write(p.render(factor=not args.no_factor, names=names) + "\n")
    return 0


def _load_poly(text: str) -> PolynomialSlice:
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    try:
        return PolynomialSlice.from_json(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--poly is not valid JSON: {exc}") from None


def _eval(args, out) -> int:
    f = _load_poly(args.poly)
    n, basis, names = _basis(f.n, args.quaternion)
    p = expand_slice(list(f.coeffs), n, basis)
    if len(args.at) != p.nvars:
        raise UsageError(f"--at needs {p.nvars} coordinates")
    op = POLY_OPS[args.op]
    q = p if args.op == "value" else _iterate(op, p, args.iter)
    value = q.evaluate(list(args.at))
    if args.output == "json":
        doc = {"op": args.op, "iter": args.iter, "at": [str(c) for c in args.at],
               "value": {str(b): str(c) for b, c in value.nonzero()},
               "polynomial": q.render(factor=False, names=names)}
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        out.write((quat_str(value) if names else str(value)) + "\n")
    return 0


# -- zonal / poisson -------------------------------------------------------------------

def _zonal(args, out) -> int:
    algebra = "H" if args.quaternion else "R3"
    if args.m < 0:
        raise UsageError("--m must be >= 0")
    a = args.a
    if abs(sum(c * c for c in a) - 1.0) > 1e-12:
        raise UsageError("--a must be a unit vector")
    if args.x is not None:
        points = [list(args.x)]
    else:
        rng = np.random.default_rng(_seed(args.seed))
        points = []
        for _ in range(args.samples):
            v = rng.standard_normal(4)
            points.append([float(c) for c in v / np.linalg.norm(v)])
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["m", "x0", "x1", "x2", "x3", "a0", "a1", "a2", "a3", "Z_m", "gegenbauer", "abs_residual"])
    for x in points:
        for m in range(args.m + 1):
            z = float(hm.zonal(m, x, a, algebra))
            g = hm.zonal_from_gegenbauer(m, x, a)
            w.writerow([m, *map(repr, x), *map(repr, a), repr(z), repr(g), repr(abs(z - g))])
    return 0


def _poisson(args, out) -> int:
    algebra = "H" if args.quaternion else "R3"
    if args.M < 0:
        raise UsageError("--M must be >= 0")
    try:
        rows = hm.poisson_partial_sums(args.x, args.M, args.a, algebra)
    except CliffordError as exc:
        raise UsageError(str(exc)) from None
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["M", "partial_sum", "exact", "error", "tail_bound"])
    for r in rows:
        w.writerow([r["M"], repr(r["partial_sum"]), repr(r["exact"]), repr(r["error"]), repr(r["bound"])])
    return 0


COMMANDS = {"verify": _verify, "expand": _expand, "eval": _eval, "zonal": _zonal, "poisson": _poisson}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except (CliffordError, ZeroDivisionError, OSError) as exc:
        print(f"slicecalc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
