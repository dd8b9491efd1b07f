"""``lab`` command line: figure reproduction, residual studies and certification."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .certify import THEOREMS, certify
from .errors import ConfigurationError, DomainError, UsageError
from .evaluator import SCHEMES, QuadratureSpec
from .experiments import KINDS, ExperimentSpec, emit_csv, emit_svg, run
from .functions import builtin_names
from .kernel import UnSequence


def _int_list(text):
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="evaluate the operator for an experiment")
    r.add_argument("kind", choices=KINDS)
    r.add_argument("--n", type=_int_list, default=None, help="comma-separated n list, e.g. 25,50,100")
    r.add_argument("--sequence", default="identity", help="identity | power:<p> | table:<path>")
    r.add_argument("--function", default=None, help=f"builtin: {', '.join(builtin_names())}")
    r.add_argument("--function2", default=None, help="second function (gruss only)")
    r.add_argument("--x0", type=float, default=None, help="evaluation point of residual studies")
    r.add_argument("--xmin", type=float, default=0.0)
    r.add_argument("--xmax", type=float, default=4.0)
    r.add_argument("--points", type=int, default=401)
    r.add_argument("--quad-order", type=int, default=None)
    r.add_argument("--scheme", choices=SCHEMES, default=None)
    r.add_argument("--tol", type=float, default=None, help="series truncation tolerance")
    r.add_argument("--csv", default=None)
    r.add_argument("--svg", default=None)
    r.add_argument("--json", default=None, help="write the full report (metadata, series) as JSON")

    c = sub.add_parser("certify", help="run a theorem certification suite")
    c.add_argument("theorem", choices=THEOREMS)
    c.add_argument("--verbose", action="store_true")
    return p


def _spec_from_args(args) -> ExperimentSpec:
    base = ExperimentSpec(kind=args.kind).resolved()
    quad = base.quad
    if args.quad_order is not None or args.scheme or args.tol is not None:
        quad = QuadratureSpec(
            scheme=args.scheme or quad.scheme,
            order=args.quad_order if args.quad_order is not None else quad.order,
            series_tol=args.tol if args.tol is not None else quad.series_tol,
        )
    return ExperimentSpec(
        kind=args.kind, function=args.function, function2=args.function2, ns=args.n,
        sequence=UnSequence.parse(args.sequence), x_min=args.xmin, x_max=args.xmax,
        points=args.points, x0=args.x0, quad=quad, csv_path=args.csv, svg_path=args.svg,
    )


def _report_json(report) -> dict:
    out = {
        "metadata": report.metadata,
        "summary": {str(n): {"sup_error": s, "mean_error": m} for n, (s, m) in report.summary.items()},
    }
    if report.series is not None:
        out["series"] = {"ns": report.series.ns, "us": report.series.us,
                         "values": report.series.residuals, "slope": report.series.slope,
                         "extra": report.series.extra}
    if report.checks:
        out["checks"] = report.checks
    return out


def _cmd_run(args) -> int:
    report = run(_spec_from_args(args))
    print(f"{report.spec.kind}: g = {report.spec.function}, sequence {report.spec.sequence.describe()}")
    print(f"{'n':>6} {'u_n':>10} {'sup error':>14} {'mean error':>14}")
    for n in report.ns:
        sup, mean = report.summary[n]
        print(f"{n:>6} {report.metadata['u_n'][n]:>10.6g} {sup:>14.6e} {mean:>14.6e}")
    if report.series is not None:
        s = report.series
        print(f"series at x0={report.spec.x0}: slope={s.slope if s.slope is None else round(s.slope, 4)}")
        for n, u, v in zip(s.ns, s.us, s.residuals):
            print(f"  n={n:<6} u_n={u:<10.6g} {v:.6e}")
    for chk in report.checks:
        print(f"  u_n={chk['u_n']:g} x={chk['x']:g}: lhs={chk['lhs']:.4e} rhs={chk['rhs']:.4e} "
              f"{'ok' if chk['holds'] else 'VIOLATED'}")
    if args.csv:
        emit_csv(report, args.csv)
    if args.svg:
        emit_svg(report, args.svg)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(_report_json(report), fh, indent=2, default=str)
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        status, text = certify(args.theorem, verbose=args.verbose)
        print(text)
        return status
    except (ConfigurationError, DomainError, UsageError, OSError) as exc:
        print(f"lab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
