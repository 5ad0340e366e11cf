"""Command-line front end.

Exit status is 0 on success, 1 for invalid input, 2 for a numerical
failure. Data goes to stdout (or ``--output``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import sys

import numpy as np

from . import __version__, _backend
from .bounds import bound_report
from .eigensolver import ODE_TOL, SOLVER_TOL, RadialEigenProblem, solve_first_eigenvalue
from .errors import DomainError, NumericalError
from .experiments import (
    DEFAULT_EPS,
    records_to_csv,
    records_to_json,
    run_limit_studies,
    run_sharpness_sweep,
    run_sphere_sweep,
)
from .geometry import RadialDomain, Unit, interval_domain, parse_profile
from .numerics import Tolerance
from .ptrig import arcsin_p, cos_p, cot_p, pi_p, sin_p, tan_p

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2

PTRIG_FUNCTIONS = {
    "sinp": sin_p,
    "cosp": cos_p,
    "tanp": tan_p,
    "cotp": cot_p,
    "arcsinp": arcsin_p,
    "pip": None,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _float_list(text):
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _add_common(sp, *, profile=True, eps_default=None, p_default=2.0):
    sp.add_argument("--p", type=float, default=p_default, help="exponent p in [1.05, 100] (default: %(default)s)")
    sp.add_argument("--n", type=int, default=3, help="dimension n >= 2 (default: %(default)s)")
    if profile:
        sp.add_argument("--R", type=float, default=1.0, help="outer radius, or interval length for --profile unit (default: %(default)s)")
        sp.add_argument(
            "--profile",
            default="euclidean",
            help="warping profile: euclidean, sphere, unit (interval mode), bump:<eps>, table:<csv> (default: %(default)s)",
        )
    if eps_default is not None:
        sp.add_argument(
            "--eps",
            type=_float_list,
            default=list(eps_default),
            help="comma-separated epsilon list (default: %s)" % ",".join(map(str, eps_default)),
        )
    sp.add_argument("--format", choices=("csv", "json", "text"), default="text", help="output format (default: %(default)s)")
    sp.add_argument("--output", default=None, help="write data to this path instead of stdout")
    sp.add_argument("--rel-tol", type=float, default=SOLVER_TOL.rel_tol, help="relative bracket width for lambda (default: %(default)s)")
    sp.add_argument("--ode-rtol", type=float, default=ODE_TOL.rel_tol, help="ODE relative local error (default: %(default)s)")
    sp.add_argument("--ode-atol", type=float, default=ODE_TOL.abs_tol, help="ODE absolute local error (default: %(default)s)")
    sp.add_argument("--backend", choices=sorted(_backend.KERNELS), default=None, help=f"shooting kernel (default: {_backend.BACKEND})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="plapeig", description="First Dirichlet eigenvalue of the p-Laplacian on radial warped-product domains.")
    parser.add_argument("--version", action="store_true", help="print version and build metadata")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("ptrig", help="evaluate a generalized trigonometric function")
    sp.add_argument("--p", type=float, default=2.0, help="exponent p in [1.05, 100] (default: %(default)s)")
    sp.add_argument("--fn", choices=sorted(PTRIG_FUNCTIONS), default="sinp", help="function (default: %(default)s)")
    sp.add_argument("--t", type=float, default=0.0, help="argument (default: %(default)s; ignored for pip)")
    sp.add_argument("--format", choices=("csv", "json", "text"), default="text", help="output format (default: %(default)s)")
    sp.add_argument("--output", default=None, help="write data to this path instead of stdout")

    _add_common(sub.add_parser("solve", help="first eigenvalue by shooting"))
    _add_common(sub.add_parser("bounds", help="all bounds for one problem"))
    _add_common(sub.add_parser("sharpness", help="bump-family sharpness sweep"), profile=False, eps_default=DEFAULT_EPS)
    _add_common(sub.add_parser("sphere", help="spherical cap sweep"), profile=False, eps_default=(0.3, 0.2, 0.1, 0.05))
    sp = sub.add_parser("limits", help="p -> 1 and p -> infinity studies")
    _add_common(sp)
    sp.add_argument("--p-low", type=_float_list, default=[1.3, 1.2, 1.1], help="p values for the p -> 1 study (default: 1.3,1.2,1.1)")
    sp.add_argument("--p-high", type=_float_list, default=[10.0, 20.0, 40.0], help="p values for the p -> infinity study (default: 10,20,40)")
    for name in ("sharpness", "sphere", "limits"):
        sub.choices[name].add_argument("--workers", type=int, default=1, help="worker processes (default: %(default)s)")
    return parser


# --------------------------------------------------------------------------


def _domain(args) -> RadialDomain:
    tag = args.profile.strip()
    if tag in ("unit", "interval"):
        return interval_domain(args.R)
    prof = parse_profile(tag)
    if isinstance(prof, Unit):
        return interval_domain(args.R)
    return RadialDomain(prof, args.n, args.R)


def _tols(args):
    return (
        Tolerance(abs_tol=SOLVER_TOL.abs_tol, rel_tol=args.rel_tol),
        Tolerance(abs_tol=args.ode_atol, rel_tol=args.ode_rtol),
    )


def _emit_mapping(data: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        keys = list(data)
        w.writerow(keys)
        w.writerow([_cell(data[k]) for k in keys])
        return buf.getvalue()
    width = max(len(k) for k in data)
    return "".join(f"{k:<{width}}  {_cell(v)}\n" for k, v in data.items())


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ";".join(str(x) for x in v)
    if v is None:
        return ""
    return str(v)


def _cmd_ptrig(args):
    p = args.p
    if args.fn == "pip":
        value = pi_p(p)
    else:
        value = float(PTRIG_FUNCTIONS[args.fn](p, args.t))
    return _emit_mapping({"fn": args.fn, "p": p, "t": args.t, "value": value}, args.format) if args.format != "text" else repr(value) + "\n"


def _cmd_solve(args):
    tol, ode_tol = _tols(args)
    prob = RadialEigenProblem(args.p, _domain(args))
    res = solve_first_eigenvalue(prob, tol=tol, ode_tol=ode_tol, backend=args.backend)
    data = {"p": prob.p, "n": prob.n, "R": prob.R, "profile": prob.domain.profile.label}
    data.update(res.to_dict())
    return _emit_mapping(data, args.format)


def _cmd_bounds(args):
    prob = RadialEigenProblem(args.p, _domain(args))
    rep = bound_report(prob)
    return _emit_mapping(rep.to_dict(), args.format)


def _emit_records(records, fmt):
    if fmt == "json":
        return records_to_json(records) + "\n"
    if fmt == "csv":
        return records_to_csv(records)
    lines = []
    for r in records:
        eps = "" if r.epsilon is None else f" eps={r.epsilon:g}"
        lines.append(f"{r.experiment} p={r.p:g} n={r.n}{eps} R={r.radius:.6g} lambda={r.lam!r} bound={r.bound!r} ratio={r.ratio!r} upper={r.upper!r}")
        if r.extra:
            lines.append("    " + r.notes())
    return "\n".join(lines) + "\n"


def _cmd_sharpness(args):
    return _emit_records(run_sharpness_sweep(args.p, args.n, args.eps, workers=args.workers), args.format)


def _cmd_sphere(args):
    return _emit_records(run_sphere_sweep(args.p, args.n, args.eps, workers=args.workers), args.format)


def _cmd_limits(args):
    recs = run_limit_studies(_domain(args), args.p_low, args.p_high, workers=args.workers)
    return _emit_records(recs, args.format)


COMMANDS = {
    "ptrig": _cmd_ptrig,
    "solve": _cmd_solve,
    "bounds": _cmd_bounds,
    "sharpness": _cmd_sharpness,
    "sphere": _cmd_sphere,
    "limits": _cmd_limits,
}


def version_text() -> str:
    return (
        f"plapeig {__version__} (kernel backend: {_backend.BACKEND}; "
        f"python {platform.python_version()}; numpy {np.__version__})\n"
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        sys.stderr.write(str(err))
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_INPUT
    if args.version:
        sys.stdout.write(version_text())
        return EXIT_OK
    if args.command is None:
        sys.stderr.write(parser.format_usage())
        return EXIT_INPUT
    try:
        text = COMMANDS[args.command](args)
    except DomainError as err:
        sys.stderr.write(f"plapeig: invalid input: {err}\n")
        return EXIT_INPUT
    except NumericalError as err:
        sys.stderr.write(f"plapeig: numerical failure: {err}\n")
        return EXIT_NUMERICAL
    except (ValueError, OSError) as err:
        sys.stderr.write(f"plapeig: invalid input: {err}\n")
        return EXIT_INPUT
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
