"""``clrspline`` command line: clr | fit | curves | report."""
from __future__ import annotations

import argparse
import sys

from . import pipeline
from .exceptions import ClrSplineError
from .io import INPUT_KINDS, MODES, FitConfig, read_coefficient_csv, read_histogram_csv

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="clrspline",
                     description="Zero-integral smoothing splines for clr-transformed histograms.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_ in (("clr", "centred logratio table of the input proportions"),
                        ("fit", "B-spline coefficient table"),
                        ("curves", "sampled clr and density curves (long format)"),
                        ("report", "per-row diagnostics")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--input", required=True, help="CSV with header label,group,<midpoints...>")
        p.add_argument("--output", help="output path (default: standard output)")
        if name == "clr":
            continue
        p.add_argument("--input-kind", choices=INPUT_KINDS, default="proportions",
                       help="whether the input holds proportions or ready clr values")
        p.add_argument("--config", help="JSON file with FitConfig fields")
        p.add_argument("--knots", type=_floats, help="a,lam1,...,lamg,b")
        p.add_argument("--degree", type=int)
        p.add_argument("--order", type=int)
        p.add_argument("--alpha", type=float)
        p.add_argument("--weights", type=_floats, help="one weight, or one per class")
        p.add_argument("--mode", choices=MODES)
        p.add_argument("--grid", type=int)
        p.add_argument("--rcond", type=float)
        if name == "report":
            p.add_argument("--coefficients", action="store_true",
                           help="treat --input as a coefficient table (label,group,b_...) and "
                                "audit its zero-integral identity instead of fitting")
            p.add_argument("--rtol", type=float, default=1e-3,
                           help="relative identity tolerance for --coefficients")
    return parser


def _config(args) -> FitConfig:
    base = FitConfig.from_json(args.config) if args.config else FitConfig()
    weights = args.weights
    if weights is not None and len(weights) == 1:
        weights = weights[0]
    return base.updated(knots=args.knots, degree=args.degree, order=args.order, alpha=args.alpha,
                        weights=weights, mode=args.mode, grid=args.grid, rcond=args.rcond)


def run(args) -> int:
    if args.command == "report" and args.coefficients:
        text, ok = pipeline.cmd_audit(read_coefficient_csv(args.input), _config(args), args.rtol)
    elif args.command == "clr":
        text, ok = pipeline.cmd_clr(read_histogram_csv(args.input, "proportions"))
    else:
        dataset = read_histogram_csv(args.input, args.input_kind)
        if len(dataset) == 0:
            raise ValueError(f"{args.input}: no data rows")
        cmd = {"fit": pipeline.cmd_fit, "curves": pipeline.cmd_curves,
               "report": pipeline.cmd_report}[args.command]
        text, ok = cmd(dataset, _config(args))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_NUMERIC


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except (ClrSplineError, ValueError, OSError) as exc:
        print(f"clrspline: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
