"""Command-line front end: ``esn-ituc {generate,bounds,train,sweep,report}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
Outputs without an explicit path go to ``$ESN_ITUC_OUTPUT_DIR`` (default:
the current directory). Every file is written atomically.
"""
import argparse
import logging
import os
import sys
import warnings

import numpy as np

from . import esn, experiment, timeseries
from .errors import (
    ConvergenceError,
    DegenerateRangeError,
    DegenerateSpectrumError,
    DivergenceError,
    EsnError,
    ParameterError,
    ShapeError,
    SingularMatrixError,
)
from .esp import classify_alpha, compute_bounds, ituc_grid
from .rng import Stream

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3
OUTPUT_DIR_ENV = "ESN_ITUC_OUTPUT_DIR"

_NUMERIC = (ConvergenceError, SingularMatrixError, DegenerateSpectrumError, DivergenceError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _output_path(path, default_name):
    if path:
        return path
    return os.path.join(os.environ.get(OUTPUT_DIR_ENV, "."), default_name)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_generate(args):
    ts = timeseries.generate(args.benchmark, args.n, seed=args.seed)
    if not args.raw:
        ts, _ = timeseries.normalize_01(ts)
    out = _output_path(args.out, f"{args.benchmark}.csv")
    timeseries.write_csv(ts, out)
    print(f"wrote {len(ts)} x {ts.dim} samples to {out}")
    return EXIT_OK


def _load_matrix(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    delimiter = "," if "," in text else None
    try:
        return np.loadtxt(text.splitlines(), delimiter=delimiter, comments="#", ndmin=2)
    except ValueError as exc:
        raise ParameterError(f"cannot parse matrix file {path}: {exc}") from exc


def cmd_bounds(args):
    if args.matrix:
        w = _load_matrix(args.matrix)
    else:
        n_s = args.random
        w = Stream(args.seed).uniform(-0.5, 0.5, (n_s, n_s))
    b = compute_bounds(w)
    print(f"n_s={w.shape[0]}")
    print(f"eta={b.eta!r}")
    print(f"rho={b.rho!r}")
    print(f"eta/rho={b.ratio!r}")
    print(f"u_low={b.u_low!r}")
    print(f"u_high={b.u_high!r}")
    if args.alpha is not None:
        print(f"alpha={args.alpha!r} regime={classify_alpha(b, args.alpha)}")
    return EXIT_OK


def cmd_train(args):
    n_train, n_test, gamma = experiment.BENCHMARK_DEFAULTS[args.benchmark]
    if args.gamma is not None:
        gamma = args.gamma
    data, _ = timeseries.normalize_01(timeseries.generate(args.benchmark, n_train + n_test,
                                                          seed=args.seed))
    u = data.values
    config = esn.ReservoirConfig(n_s=args.n_s, n_a=data.dim, n_b=data.dim, gamma=gamma,
                                 washout=args.washout, seed=args.seed)
    model, w0 = esn.init_model(config)
    bounds = compute_bounds(w0)
    if args.alpha is not None:
        alpha = args.alpha
    else:
        if not 1 <= args.alpha_index <= args.k:
            raise UsageError(f"--alpha-index must lie in 1..{args.k}")
        alpha = float(ituc_grid(bounds, args.k)[args.alpha_index - 1])
    model = model.with_alpha(alpha)
    esn.train(model, u[: n_train - 1], u[1:n_train])
    tf = esn.predict_teacher_forced(model, u[n_train - 1 - args.washout: n_train + n_test - 1])
    fr = esn.predict_free_run(model, u[: n_train], args.horizon)
    print(f"eta={bounds.eta!r} rho={bounds.rho!r} u_low={bounds.u_low!r} u_high={bounds.u_high!r}")
    print(f"alpha={alpha!r} regime={classify_alpha(bounds, alpha)}")
    print(f"nrmse_teacher_forced={esn.nrmse(tf, u[n_train:]):.6g}")
    print(f"nrmse_free_run_{args.horizon}={esn.nrmse(fr, u[n_train: n_train + args.horizon]):.6g}")
    if args.save:
        esn.save_model(model, args.save)
        print(f"saved model to {args.save}")
    return EXIT_OK


def _write_report(records, out_dir):
    nrmse_grid, mmds_grid = experiment.aggregate(records)
    os.makedirs(out_dir, exist_ok=True)
    timeseries.atomic_write_text(os.path.join(out_dir, "surface.csv"),
                                 experiment.surface_csv_text(nrmse_grid, mmds_grid))
    for grid in (nrmse_grid, mmds_grid):
        timeseries.atomic_write_text(os.path.join(out_dir, f"surface_{grid.metric}.txt"),
                                     experiment.gnuplot_matrix_text(grid))
    missing = int(nrmse_grid.missing().sum())
    if missing:
        print(f"warning: {missing} surface cell(s) have no valid trials and are marked missing",
              file=sys.stderr)
    return nrmse_grid


def cmd_sweep(args):
    if args.emit_plan:
        plan = experiment.SweepPlan.published(args.emit_plan)
        timeseries.atomic_write_text(args.plan, plan.to_json())
        print(f"wrote {plan.total_trials}-trial plan to {args.plan}")
        return EXIT_OK
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    plan = experiment.SweepPlan.load(args.plan)
    out_dir = _output_path(args.out_dir, "")
    os.makedirs(out_dir or ".", exist_ok=True)
    records = experiment.run_sweep(plan, workers=args.workers)
    experiment.write_results_csv(records, os.path.join(out_dir, "results.csv"))
    nrmse_grid = _write_report(records, out_dir)
    print("\n".join(experiment.summary_lines(records, nrmse_grid)))
    return EXIT_OK


def cmd_report(args):
    records = experiment.read_results_csv(args.results)
    out_dir = args.out_dir or os.path.dirname(os.path.abspath(args.results))
    nrmse_grid = _write_report(records, out_dir)
    print("\n".join(experiment.summary_lines(records, nrmse_grid)))
    return EXIT_OK


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="esn-ituc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a benchmark series as CSV")
    g.add_argument("--benchmark", required=True, choices=timeseries.BENCHMARKS)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.add_argument("--raw", action="store_true", help="skip the [0, 1] normalization")
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("bounds", help="ESP bounds and ITUC of a reservoir matrix")
    src = b.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", help="text/CSV file holding a square matrix")
    src.add_argument("--random", type=int, metavar="N_S",
                     help="draw an N_S x N_S uniform[-0.5, 0.5] reservoir")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--alpha", type=float)
    b.set_defaults(func=cmd_bounds)

    t = sub.add_parser("train", help="train and score a single network")
    t.add_argument("--benchmark", required=True, choices=timeseries.BENCHMARKS)
    t.add_argument("--n-s", type=int, required=True)
    t.add_argument("--seed", type=int, default=0)
    a = t.add_mutually_exclusive_group()
    a.add_argument("--alpha", type=float)
    a.add_argument("--alpha-index", type=int, default=1)
    t.add_argument("--k", type=int, default=10)
    t.add_argument("--gamma", type=float)
    t.add_argument("--washout", type=int, default=100)
    t.add_argument("--horizon", type=int, default=84)
    t.add_argument("--save", help="write the trained model as JSON")
    t.set_defaults(func=cmd_train)

    s = sub.add_parser("sweep", help="run a sweep plan")
    s.add_argument("--plan", required=True, help="plan JSON (read, or written with --emit-plan)")
    s.add_argument("--out-dir")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--emit-plan", choices=timeseries.BENCHMARKS, metavar="BENCHMARK",
                   help="write the published-protocol plan for BENCHMARK to --plan and exit")
    s.set_defaults(func=cmd_sweep)

    r = sub.add_parser("report", help="aggregate a results CSV into surfaces")
    r.add_argument("results")
    r.add_argument("--out-dir")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except UsageError as exc:
        print(f"esn-ituc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _NUMERIC as exc:
        print(f"esn-ituc: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ParameterError, ShapeError, DegenerateRangeError, OSError) as exc:
        print(f"esn-ituc: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except EsnError as exc:
        print(f"esn-ituc: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
