"""Command-line front end: ``adjauc {fit,evaluate,cv,bootstrap,simulate}``.

Exit codes: 0 success, 2 invalid input or flags, 3 numerical failure, 4 I/O.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys
from dataclasses import asdict

import numpy as np

from .dataset import load_table
from .errors import NumericalError, ValidationError
from .lococv import CvConfig, default_grid, emit_cv_table, run_lococv
from .pipeline import FitConfig, evaluate, fit
from .reports import header_lines, read_fit_report, write_fit_report, write_header, write_performance, write_summary
from .resample import SCHEMES, BootstrapConfig, bootstrap_corrected_aauc
from .simgen import FAMILIES, METHODS, PopulationSpec, run_study
from .sphere_optimizer import OptimizerConfig

EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 2, 3, 4


class UsageError(ValidationError):
    pass


def _delimiter(name: str) -> str:
    return {"tab": "\t", "\\t": "\t", "comma": ","}.get(name, name)


def _add_input(p):
    p.add_argument("input", help="delimited file with center, outcome and marker columns")
    p.add_argument("--delimiter", default=",", help="field separator: ',' (default) or 'tab'")
    p.add_argument("--center-col", default="center")
    p.add_argument("--outcome-col", default="outcome")
    p.add_argument("--markers", default=None, help="comma-separated marker columns (default: all others)")


def _add_output(p):
    p.add_argument("-o", "--output", default="-", help="output path ('-' for stdout)")


def _add_fit_flags(p, lam=True):
    if lam:
        p.add_argument("--lambda", dest="lam", type=float, default=0.0, help="variability penalty (>= 0)")
    p.add_argument("--standardize", dest="standardize", action="store_true", default=True)
    p.add_argument("--no-standardize", dest="standardize", action="store_false")
    p.add_argument("--restarts", type=int, default=0, help="extra random starts")
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adjauc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a (penalized) SaAUC combination")
    _add_input(p)
    _add_output(p)
    _add_fit_flags(p)

    p = sub.add_parser("evaluate", help="per-center AUCs and aAUC of given coefficients")
    _add_input(p)
    _add_output(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--theta", help="comma-separated coefficients in marker order")
    src.add_argument("--report", help="fit report whose coefficients to use")
    p.add_argument("--reference", type=float, default=None, help="external aAUC for the second variability")

    p = sub.add_parser("cv", help="leave-one-center-out cross-validation over a lambda grid")
    _add_input(p)
    _add_output(p)
    _add_fit_flags(p, lam=False)
    p.add_argument("--grid-size", type=int, default=50)
    p.add_argument("--grid-min", type=float, default=0.1)
    p.add_argument("--grid-max", type=float, default=200.0)

    p = sub.add_parser("bootstrap", help="optimism-corrected aAUC")
    _add_input(p)
    _add_output(p)
    _add_fit_flags(p)
    p.add_argument("--B", type=int, default=200, help="bootstrap replicates")
    p.add_argument("--scheme", choices=SCHEMES, default="stratified")

    p = sub.add_parser("simulate", help="replication study on a simulated population")
    _add_output(p)
    p.add_argument("--family", choices=FAMILIES, default="two_marker_outlier")
    p.add_argument("--pi", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--M", type=int, default=50)
    p.add_argument("--Nc", type=int, default=5000)
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--nc", type=int, default=200)
    p.add_argument("--link", choices=("f", "g"), default="f")
    p.add_argument("--variance-mode", choices=("per_marker", "per_center"), default="per_marker")
    p.add_argument("--methods", default=",".join(METHODS))
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--threads", type=int, default=1)
    return parser


def _load(args):
    markers = args.markers.split(",") if args.markers else None
    return load_table(args.input, args.center_col, args.outcome_col, markers, _delimiter(args.delimiter))


def _fit_config(args, lam: float = 0.0) -> FitConfig:
    if args.restarts < 0 or args.max_iter < 0 or args.threads < 1:
        raise UsageError("--restarts and --max-iter must be >= 0 and --threads >= 1")
    opt = OptimizerConfig(max_iterations=args.max_iter, restarts=args.restarts, seed=args.seed)
    start = "logistic+restarts" if args.restarts else "logistic"
    return FitConfig(lam=lam, standardize=args.standardize, optimizer=opt, start=start)


def _resolved(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("verbose",)}


@contextlib.contextmanager
def _sink(path):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def cmd_fit(args) -> None:
    cfg = _fit_config(args, args.lam)
    report = fit(_load(args), cfg)
    with _sink(args.output) as out:
        write_header(out, header_lines("fit", {**_resolved(args), "fit_config": asdict(cfg)}))
        write_fit_report(out, report)


def cmd_evaluate(args) -> None:
    data = _load(args)
    if args.report:
        with open(args.report, encoding="utf-8") as fh:
            theta = read_fit_report(fh)["theta"]
    else:
        try:
            theta = np.array([float(t) for t in args.theta.split(",")])
        except ValueError:
            raise UsageError(f"--theta: cannot parse {args.theta!r}") from None
    theta = theta / np.linalg.norm(theta)
    perf = evaluate(theta, data, args.reference)
    with _sink(args.output) as out:
        write_header(out, header_lines("evaluate", _resolved(args)))
        write_performance(out, perf, {f"coef.{n}": float(t) for n, t in zip(data.marker_names, theta)})


def cmd_cv(args) -> None:
    if args.grid_size < 1 or not 0 < args.grid_min <= args.grid_max:
        raise UsageError("grid needs --grid-size >= 1 and 0 < --grid-min <= --grid-max")
    cfg = CvConfig(
        lambdas=tuple(default_grid(args.grid_size, args.grid_min, args.grid_max)),
        fit=_fit_config(args),
        seed=args.seed,
        threads=args.threads,
    )
    table = run_lococv(_load(args), cfg)
    hdr = header_lines("cv", _resolved(args)) + [f"completeness: {table.completeness!r}"]
    with _sink(args.output) as out:
        emit_cv_table(table, out, header_lines=hdr)


def cmd_bootstrap(args) -> None:
    cfg = BootstrapConfig(B=args.B, scheme=args.scheme, seed=args.seed, fit=_fit_config(args, args.lam), threads=args.threads)
    res = bootstrap_corrected_aauc(_load(args), cfg)
    with _sink(args.output) as out:
        write_header(out, header_lines("bootstrap", _resolved(args)))
        out.write(f"apparent\t{res.apparent:.17g}\n")
        out.write(f"corrected\t{res.corrected:.17g}\n")
        out.write(f"mean_optimism\t{res.mean_optimism:.17g}\n")
        out.write(f"replicates\t{res.optimism.size}\n")
        out.write(f"skipped\t{res.skipped}\n")


def cmd_simulate(args) -> None:
    if args.reps < 1:
        raise UsageError("--reps must be >= 1")
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    for m in methods:
        if m not in METHODS:
            raise UsageError(f"--methods: unknown method {m!r}")
    spec = PopulationSpec(
        family=args.family, M=args.M, N_c=args.Nc, m=args.m, n_c=args.nc, pi=args.pi,
        link=args.link, variance_mode=args.variance_mode, seed=args.seed,
    )
    fit_cfg = FitConfig(optimizer=OptimizerConfig(max_iterations=args.max_iter))
    summary = run_study(spec, args.reps, methods, fit_cfg, threads=args.threads)
    with _sink(args.output) as out:
        write_header(out, header_lines("simulate", {**_resolved(args), "population": asdict(spec)}))
        write_summary(out, summary)


COMMANDS = {
    "fit": cmd_fit,
    "evaluate": cmd_evaluate,
    "cv": cmd_cv,
    "bootstrap": cmd_bootstrap,
    "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "lam", 0.0) is not None and not getattr(args, "lam", 0.0) >= 0:
        print(f"adjauc: error: --lambda must be >= 0, got {args.lam}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"adjauc: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"adjauc: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"adjauc: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
