"""Main entry point for the nufreg command-line tool."""

import argparse
import sys
from typing import List, Optional

from cli.cli_app import CLIApp
from core.config import config


class NufregArgumentParser(argparse.ArgumentParser):
    """Reports usage errors in the same 'ERROR: parse:' form as dataset and model errors."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"ERROR: parse: {self.prog}: {message}", file=sys.stderr)
        sys.exit(2)


def build_parser() -> argparse.ArgumentParser:
    parser = NufregArgumentParser(
        prog="nufreg",
        description="Fuzzy linear regression with crisp coefficients and non-uniform error spreads.")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="Print progress of the coefficient and spread searches.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {config.get_version()}")
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="Fit a model to an 8-column CSV of trapezoidal observations.")
    fit.add_argument("--input", required=True, dest="input_path", help="Dataset CSV.")
    fit.add_argument("--alpha-levels", type=int, default=config.ALPHA_LEVELS, dest="alpha_levels",
                     help=f"Number of alpha levels in the coefficient curves (default {config.ALPHA_LEVELS}).")
    fit.add_argument("--seed", type=int, default=config.RNG_SEED, help="Seed for the multistart search.")
    fit.add_argument("--output", required=True, dest="output_path", help="Model file to write.")
    fit.add_argument("--l-min", type=float, default=None, dest="l_min",
                     help="Lower bound on estimated left spreads (default: smallest observed).")
    fit.add_argument("--r-min", type=float, default=None, dest="r_min",
                     help="Lower bound on estimated right spreads (default: smallest observed).")
    fit.add_argument("--multistart", type=int, default=None,
                     help=f"Random interior starts per box problem (default {config.MULTISTART_COUNT}).")

    predict = sub.add_parser("predict", help="Forecast the fuzzy response for a new x.")
    predict.add_argument("--model", required=True, dest="model_path")
    predict.add_argument("--x", required=True, action="append", dest="xs",
                         help="A crisp value 'a' or a trapezoid 'a,b,c,d'. Repeat for several forecasts.")

    curve = sub.add_parser("curve", help="Export a coefficient's membership curve as CSV.")
    curve.add_argument("--model", required=True, dest="model_path")
    curve.add_argument("--coef", required=True, dest="coefficient", help="b0 or b1.")
    curve.add_argument("--output", default=None, dest="output_path", help="Write to a file instead of stdout.")
    curve.add_argument("--levels", type=int, default=None,
                       help="Resample the curve at this many evenly spaced alpha levels (default: as fitted).")

    report = sub.add_parser("report", help="Compare the non-uniform model with the shared-term baseline.")
    report.add_argument("--input", required=True, dest="input_path")
    report.add_argument("--model", required=True, dest="model_path")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Parses arguments and runs the selected command."""
    try:
        args = vars(build_parser().parse_args(argv))
    except SystemExit as e:
        # --help, --version and usage errors end here instead of killing the caller.
        return e.code if isinstance(e.code, int) else 0
    command = args.pop("command")
    verbose = args.pop("verbose")
    return CLIApp(verbose=verbose).run(command, **args)


if __name__ == "__main__":
    sys.exit(main())
