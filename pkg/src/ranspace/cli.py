"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 precondition violation,
3 cover counterexample found.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import math
import sys
from pathlib import Path

from . import io
from .config import PNorm, hausdorff
from .covers import exists_map, weiss_cover_falsify
from .meb import SolverOptions, continuity_probe, solve_restricted_meb
from .strata import chart_forward, chart_inverse

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _p_value(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    return float(text)


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _rotund(p: float) -> PNorm:
    norm = PNorm(p)
    if not norm.rotund:
        raise ValueError(f"p = {norm} is not rotund; this command needs 1 < p < inf")
    return norm


def _solver_options(args) -> SolverOptions:
    return SolverOptions(max_iterations=args.max_iterations, tolerance=args.tolerance,
                         restarts=args.restarts, seed=args.seed)


def cmd_dist(args) -> int:
    S = io.load_configuration(args.first)
    T = io.load_configuration(args.second)
    _emit(io.fmt(hausdorff(S, T, PNorm(args.p))), args.out)
    return EXIT_OK


def cmd_meb(args) -> int:
    norm = _rotund(args.p)
    S = io.load_configuration(args.input)
    if args.svg and S.dim != 2:
        raise ValueError(f"--svg needs a planar configuration, got dim {S.dim}")
    ball = solve_restricted_meb(S, norm, _solver_options(args))
    _emit(io.dumps(ball.to_dict()), args.out)
    if args.svg:
        from .plotting import plot_enclosing_ball
        plot_enclosing_ball(S, ball, args.svg)
    return EXIT_OK


def cmd_chart(args) -> int:
    if args.inverse:
        chart = io.load_chart(args.input)
        S = chart_inverse(chart.center, chart.cone)
        _emit(io.dumps(io.configuration_to_dict(S)), args.out)
        return EXIT_OK
    norm = _rotund(args.p)
    S = io.load_configuration(args.input)
    chart = chart_forward(S, norm, _solver_options(args))
    _emit(io.dumps(io.chart_to_dict(chart)), args.out)
    return EXIT_OK


def cmd_cover(args) -> int:
    V = io.load_region(args.region)
    family = io.load_family(args.family)
    report = weiss_cover_falsify(V, family, args.n, args.samples, args.seed)
    _emit(str(report), args.out)
    return EXIT_COUNTEREXAMPLE if report.found else EXIT_OK


def cmd_exists(args) -> int:
    S = io.load_configuration(args.input)
    labeling = io.load_labeling(args.labeling)
    hit = exists_map(S, labeling)
    _emit(io.dumps([label for label in labeling.labels if label in hit]), args.out)
    return EXIT_OK


def cmd_probe(args) -> int:
    norm = _rotund(args.p)
    S = io.load_configuration(args.input)
    deltas = [float(x) for x in args.deltas.split(",") if x.strip()]
    opts = SolverOptions(max_iterations=args.max_iterations, tolerance=args.tolerance,
                         restarts=1, seed=args.seed)
    report = continuity_probe(S, norm, deltas, args.trials, args.seed, opts)
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["delta", "median_dr", "median_dc"])
    for row in report.rows:
        writer.writerow([io.fmt(row.delta), io.fmt(row.median_radius_deviation),
                         io.fmt(row.median_center_deviation)])
    _emit(buf.getvalue().rstrip("\n"), args.out)
    if args.plot:
        from .plotting import plot_probe
        plot_probe(report, args.plot)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ranspace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, solver=False):
        sp.add_argument("--p", type=_p_value, default=2.0, help="norm exponent (default 2)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="write the result here instead of stdout")
        if solver:
            sp.add_argument("--restarts", type=int, default=5)
            sp.add_argument("--max-iterations", type=int, default=100_000)
            sp.add_argument("--tolerance", type=float, default=1e-10)

    sp = sub.add_parser("dist", help="metric exponential distance between two configurations")
    sp.add_argument("first")
    sp.add_argument("second")
    common(sp)
    sp.set_defaults(func=cmd_dist)

    sp = sub.add_parser("meb", help="restricted minimal enclosing ball")
    sp.add_argument("input")
    sp.add_argument("--svg", help="also draw the points and ball (planar inputs only)")
    common(sp, solver=True)
    sp.set_defaults(func=cmd_meb)

    sp = sub.add_parser("chart", help="conical chart of a configuration, or its inverse")
    sp.add_argument("input")
    sp.add_argument("--inverse", action="store_true", help="read a chart, print the configuration")
    common(sp, solver=True)
    sp.set_defaults(func=cmd_chart)

    sp = sub.add_parser("cover", help="search for a Weiss cover counterexample")
    sp.add_argument("region")
    sp.add_argument("family")
    sp.add_argument("--n", type=int, default=2, help="max cardinality of sampled sets")
    sp.add_argument("--samples", type=int, default=10_000)
    common(sp)
    sp.set_defaults(func=cmd_cover)

    sp = sub.add_parser("exists", help="labels of the components a configuration meets")
    sp.add_argument("input")
    sp.add_argument("labeling")
    common(sp)
    sp.set_defaults(func=cmd_exists)

    sp = sub.add_parser("probe", help="continuity probe of the enclosing ball, as CSV")
    sp.add_argument("input")
    sp.add_argument("--deltas", default="0.1,0.01,0.001")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--plot", help="also save a log-log figure of the medians")
    common(sp, solver=True)
    sp.set_defaults(func=cmd_probe)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (io.FormatError, OSError) as exc:
        print(f"ranspace {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError) as exc:
        print(f"ranspace {args.command}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
