"""Command-line driver.

Subcommands: fig1 | fig2 | fig3 | recover | bnm | emit-svg.
Exit codes: 0 success, 1 numerical-regime error, 2 input error.

BLAS/OpenMP thread pools are pinned to one thread before numpy loads so
that outputs are byte-identical regardless of the ambient thread count.
"""

from __future__ import annotations

import argparse
import os
import sys


def _pin_threads() -> None:
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                "NUMEXPR_NUM_THREADS", "VECLIB_MAXIMUM_THREADS"):
        os.environ[var] = "1"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gibbslab",
        description="Reconstruction of analytic functions from truncated Fourier data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", default="out", metavar="DIR", help="output directory")
        p.add_argument("--config", metavar="FILE", help="JSON experiment config")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--kappa0", type=float, default=None)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--stride", type=int, default=None)
        p.add_argument("--precision", choices=("double", "dd"), default=None)
        p.add_argument("--no-plots", action="store_true", help="skip PNG rendering")

    for name in ("fig1", "fig2", "fig3"):
        add_common(sub.add_parser(name, help=f"reproduce the {name} data files"))

    rec = sub.add_parser("recover", help="one-shot reconstruction")
    rec.add_argument("--method", required=True, choices=("IPRM", "PLS", "FE", "iprm", "pls", "fe"))
    rec.add_argument("--coeffs", metavar="FILE", help="coefficient CSV (j, re, im)")
    rec.add_argument("--function", metavar="SPEC", help="test function, e.g. runge:10")
    rec.add_argument("--m", type=int)
    rec.add_argument("--n", type=int)
    rec.add_argument("--T", type=float)
    rec.add_argument("--out", default="out", metavar="DIR")

    bq = sub.add_parser("bnm", help="stability constant for one (n, m)")
    bq.add_argument("--n", type=int, required=True)
    bq.add_argument("--m", type=int, required=True)
    bq.add_argument("--precision", choices=("double", "dd"), default="double")
    bq.add_argument("--out", metavar="FILE", help="append a CSV row to FILE")

    svg = sub.add_parser("emit-svg", help="render a CSV as an SVG line chart")
    svg.add_argument("--csv", required=True, metavar="FILE")
    svg.add_argument("--columns", required=True,
                     help="comma-separated column names; first is the x axis")
    svg.add_argument("--log-y", action="store_true")
    svg.add_argument("--out", required=True, metavar="FILE")

    return parser


def _load_config(args, figure: str):
    from .experiments import ExperimentConfig

    if args.config:
        with open(args.config) as fh:
            config = ExperimentConfig.from_json(fh.read())
    else:
        config = ExperimentConfig()
    updates = {"figure": figure, "out_dir": args.out}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.kappa0 is not None:
        updates["kappa0"] = args.kappa0
    if args.trials is not None:
        updates["trials"] = args.trials
    if args.stride is not None:
        updates["stride"] = args.stride
    if args.precision is not None:
        updates["precision_mode"] = args.precision
    if args.no_plots:
        updates["make_plots"] = False
    from dataclasses import replace

    return replace(config, **updates)


def main(argv=None) -> int:
    _pin_threads()
    args = build_parser().parse_args(argv)

    from .fourier_core import QuadratureConvergenceError
    from .framebound import PrecisionRegimeError
    from .numerics import NotPositiveDefiniteError
    from .polyspace import MatrixConsistencyError
    from .reconstruct import IprmSolveError

    numerical_errors = (PrecisionRegimeError, MatrixConsistencyError,
                        NotPositiveDefiniteError, QuadratureConvergenceError,
                        IprmSolveError)
    try:
        if args.command in ("fig1", "fig2", "fig3"):
            from .experiments import run_figure

            config = _load_config(args, args.command)
            for path in run_figure(config):
                print(path)
        elif args.command == "recover":
            from .experiments import recover

            result = recover(method=args.method, out_dir=args.out, n=args.n,
                             m=args.m, T=args.T, coeff_file=args.coeffs,
                             function_spec=args.function)
            print(result["json"])
            print(result["samples"])
            if result["l2_error"] is not None:
                print(f"l2_error={result['l2_error']:.6e}")
        elif args.command == "bnm":
            from .framebound import bnm

            rep = bnm(args.n, args.m, precision_mode=args.precision)
            print(f"n={rep.n} m={rep.m} b_value={rep.b_value:.17g} "
                  f"b_star={rep.b_star:.17g} sigma_min={rep.sigma_min:.17g} "
                  f"precision_mode={rep.precision_mode}")
            if args.out:
                new = not os.path.exists(args.out)
                with open(args.out, "a", newline="") as fh:
                    if new:
                        fh.write("n,m,b_value,b_star,sigma_min,precision_mode\n")
                    fh.write(f"{rep.n},{rep.m},{rep.b_value:.17g},{rep.b_star:.17g},"
                             f"{rep.sigma_min:.17g},{rep.precision_mode}\n")
        elif args.command == "emit-svg":
            from .plotting import emit_svg

            emit_svg(args.csv, [c.strip() for c in args.columns.split(",")],
                     args.out, log_y=args.log_y)
            print(args.out)
    except numerical_errors as exc:
        print(f"numerical regime error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
