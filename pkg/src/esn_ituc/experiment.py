"""Sweep harness: reservoir sizes x ITUC scaling factors x seeded trials.

One reservoir is drawn per (size, trial) cell and rescaled to each of the
``k_alphas`` grid points of its own ITUC, so every record in a cell shares
seed, ``eta`` and ``rho``. Indices in records are 1-based.
"""
import csv
import functools
import io
import json
import logging
import math
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import esn as esn_mod
from .errors import (
    ConvergenceError,
    DegeneratePairError,
    DegenerateSpectrumError,
    ParameterError,
    SingularMatrixError,
)
from .esp import Regime, classify_alpha, compute_bounds, ituc_grid
from .linalg import solve_ridge
from .mmds import MmdsWindow, mmds
from .rng import mix_seed
from .timeseries import BENCHMARKS, atomic_write_text, format_float, generate, normalize_01

log = logging.getLogger(__name__)

MACKEY_GLASS_SIZES = (20, 50, 75, 100, 150, 200, 250, 500, 750, 1000)
OTHER_SIZES = (20, 50, 75, 100, 150, 200, 250, 300, 400, 500)

# (n_train, n_test, gamma) per benchmark
BENCHMARK_DEFAULTS = {
    "mackey_glass": (10000, 2000, 1e-4),
    "mso": (10000, 1000, 1e-3),
    "lorenz": (13107, 3277, 1e-3),
    "rossler": (10000, 2000, 1e-3),
    "henon": (10000, 2000, 1e-3),
}

STATUS_OK = "ok"
STATUS_DEGENERATE_MMDS = "degenerate-mmds"
STATUS_NON_CONVERGED = "non-converged"

RESULTS_HEADER = ("benchmark", "n_s", "size_index", "alpha_index", "trial", "seed",
                  "alpha", "eta", "rho", "nrmse", "mmds", "status")
SURFACE_HEADER = ("n_s", "alpha_index", "mean_nrmse", "mean_mmds", "valid_count")


@dataclass(frozen=True)
class SweepPlan:
    benchmark: str
    sizes: tuple = MACKEY_GLASS_SIZES
    k_alphas: int = 10
    n_trials: int = 30
    gamma: float = 1e-4
    washout: int = 100
    eval_mode: str = "free-run"
    horizon: int = 84
    base_seed: int = 0
    n_train: int = 10000
    n_test: int = 2000
    mmds_window: int = 200

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if self.benchmark not in BENCHMARKS:
            raise ParameterError(f"unknown benchmark {self.benchmark!r}")
        if not self.sizes or min(self.sizes) < 1:
            raise ParameterError("sizes must be a non-empty list of positive integers")
        if self.k_alphas < 2:
            raise ParameterError("k_alphas must be at least 2")
        if self.n_trials < 1:
            raise ParameterError("n_trials must be positive")
        if self.gamma < 0:
            raise ParameterError("gamma must be non-negative")
        if self.eval_mode not in ("free-run", "teacher-forced"):
            raise ParameterError("eval_mode must be 'free-run' or 'teacher-forced'")
        if self.washout < 0 or self.washout >= self.n_train - 1:
            raise ParameterError("washout must be in [0, n_train - 1)")
        if self.n_test < 1 or self.horizon < 1 or self.mmds_window < 2:
            raise ParameterError("n_test, horizon must be >= 1 and mmds_window >= 2")
        if self.eval_mode == "free-run" and self.horizon > self.n_test:
            raise ParameterError("free-run horizon exceeds the test set")

    @classmethod
    def published(cls, benchmark, **overrides):
        """The published protocol for ``benchmark`` (3000 trials)."""
        if benchmark not in BENCHMARK_DEFAULTS:
            raise ParameterError(f"unknown benchmark {benchmark!r}")
        n_train, n_test, gamma = BENCHMARK_DEFAULTS[benchmark]
        sizes = MACKEY_GLASS_SIZES if benchmark == "mackey_glass" else OTHER_SIZES
        kw = dict(benchmark=benchmark, sizes=sizes, gamma=gamma, n_train=n_train, n_test=n_test)
        kw.update(overrides)
        return cls(**kw)

    @classmethod
    def smoke(cls, benchmark="mackey_glass", **overrides):
        """A 12-record plan (2 sizes x 3 alphas x 2 trials) that runs in seconds."""
        _, _, gamma = BENCHMARK_DEFAULTS[benchmark]
        kw = dict(benchmark=benchmark, sizes=(20, 30), k_alphas=3, n_trials=2, gamma=gamma,
                  n_train=1000, n_test=200)
        kw.update(overrides)
        return cls(**kw)

    @property
    def total_trials(self):
        return len(self.sizes) * self.k_alphas * self.n_trials

    def cell_seed(self, size_index, trial_index):
        return mix_seed(self.base_seed, size_index, trial_index)

    def cells(self):
        """(size_index, trial_index) pairs in canonical order."""
        return [(i, t) for i in range(1, len(self.sizes) + 1)
                for t in range(1, self.n_trials + 1)]

    def coordinates(self):
        """(size_index, trial_index, alpha_index) in canonical record order."""
        return [(i, t, j) for i, t in self.cells() for j in range(1, self.k_alphas + 1)]

    def to_json(self):
        d = asdict(self)
        d["sizes"] = list(self.sizes)
        return json.dumps(d, indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc):
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ParameterError(f"unknown plan field(s): {sorted(unknown)}")
        if "benchmark" not in doc:
            raise ParameterError("plan needs a 'benchmark' field")
        return cls(**doc)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParameterError(f"plan file is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ParameterError("plan file must hold a JSON object")
        return cls.from_dict(doc)


@dataclass
class SweepRecord:
    benchmark: str
    n_s: int
    size_index: int
    alpha_index: int
    trial_index: int
    seed: int
    alpha: float = math.nan
    eta: float = math.nan
    rho: float = math.nan
    nrmse: float = math.nan
    mmds: float = math.nan
    status: str = STATUS_OK

    @property
    def ok(self):
        return self.status == STATUS_OK


@dataclass
class SurfaceGrid:
    """Trial means on a (size, alpha_index) grid; missing cells are NaN."""

    sizes: tuple
    k_alphas: int
    mean: np.ndarray
    count: np.ndarray
    metric: str = ""

    def cell(self, n_s, alpha_index):
        return self.mean[self.sizes.index(n_s), alpha_index - 1]

    def missing(self):
        return self.count == 0


# --------------------------------------------------------------------------
# data
# --------------------------------------------------------------------------

@functools.lru_cache(maxsize=4)
def _benchmark_series(benchmark, n, seed):
    ts, _ = normalize_01(generate(benchmark, n, seed=seed))
    return ts.values


def benchmark_data(plan):
    """Normalized series of ``n_train + n_test`` samples; cached per process."""
    values = _benchmark_series(plan.benchmark, plan.n_train + plan.n_test, plan.base_seed)
    values.flags.writeable = False
    return values


# --------------------------------------------------------------------------
# trials
# --------------------------------------------------------------------------

def _evaluate(plan, data, model):
    """Train ``model`` and score it; returns ``(nrmse, mmds, status)``.

    Inputs are ``data[:-1]`` and targets ``data[1:]``. One teacher-forced
    pass over train and test supplies the training states, the one-step
    test predictions, the free-run starting state and the MMDS states.
    """
    n_train, n_test = plan.n_train, plan.n_test
    inputs = data[:-1]
    states = esn_mod.harvest(model, inputs).states  # column t follows inputs[t]
    s_train = states[:, plan.washout: n_train - 1]
    b_train = data[plan.washout + 1: n_train].T
    model.w_out = solve_ridge(s_train, b_train, plan.gamma)

    test_cols = slice(n_train - 1, n_train + n_test - 1)
    truth = data[n_train: n_train + n_test]
    if plan.eval_mode == "teacher-forced":
        pred = (model.w_out @ states[:, test_cols]).T
        score = esn_mod.nrmse(pred, truth)
    else:
        pred = esn_mod.predict_free_run(model, data[n_train - 1: n_train], plan.horizon,
                                        s0=states[:, n_train - 2])
        score = esn_mod.nrmse(pred, truth[: plan.horizon])

    window = MmdsWindow.last(n_test, plan.mmds_window)
    try:
        m = mmds(inputs[test_cols], states[:, test_cols].T, window)
    except DegeneratePairError:
        return score, math.nan, STATUS_DEGENERATE_MMDS
    return score, m, STATUS_OK


def _cell_records(plan, size_index, trial_index, alpha_indices=None):
    n_s = plan.sizes[size_index - 1]
    seed = plan.cell_seed(size_index, trial_index)
    if alpha_indices is None:
        alpha_indices = range(1, plan.k_alphas + 1)
    n_dim = benchmark_data(plan).shape[1]
    records = [SweepRecord(plan.benchmark, n_s, size_index, j, trial_index, seed)
               for j in alpha_indices]
    config = esn_mod.ReservoirConfig(n_s=n_s, n_a=n_dim, n_b=n_dim, gamma=plan.gamma,
                                     washout=plan.washout, seed=seed)
    base, w0 = esn_mod.init_model(config)
    try:
        bounds = compute_bounds(w0)
    except (ConvergenceError, DegenerateSpectrumError) as exc:
        log.warning("bounds failed for n_s=%d trial=%d: %s", n_s, trial_index, exc)
        for r in records:
            r.status = STATUS_NON_CONVERGED
        return records
    grid = ituc_grid(bounds, plan.k_alphas)
    data = benchmark_data(plan)
    for r in records:
        r.alpha = float(grid[r.alpha_index - 1])
        r.eta, r.rho = bounds.eta, bounds.rho
        try:
            r.nrmse, r.mmds, r.status = _evaluate(plan, data, base.with_alpha(r.alpha))
        except (SingularMatrixError, ConvergenceError, FloatingPointError) as exc:
            log.warning("trial failed (%s): %s", r, exc)
            r.status = STATUS_NON_CONVERGED
        if r.ok and classify_alpha(bounds, r.alpha) is not Regime.ITUC:
            raise AssertionError(f"grid point {r.alpha} left the ITUC")
    return records


def run_trial(plan, size_index, alpha_index, trial_index):
    """A single record; identical to the matching row of :func:`run_sweep`."""
    if not 1 <= size_index <= len(plan.sizes):
        raise ParameterError("size_index out of range")
    if not 1 <= alpha_index <= plan.k_alphas:
        raise ParameterError("alpha_index out of range")
    if not 1 <= trial_index <= plan.n_trials:
        raise ParameterError("trial_index out of range")
    return _cell_records(plan, size_index, trial_index, [alpha_index])[0]


def _cell_job(args):
    plan, size_index, trial_index = args
    return _cell_records(plan, size_index, trial_index)


def _sort_key(r):
    return (r.size_index, r.trial_index, r.alpha_index)


def run_sweep(plan, workers=1, progress=None):
    """All records of ``plan`` in canonical (size, trial, alpha) order.

    Cells are independent work items; with ``workers > 1`` they run in a
    process pool and are re-sorted, so output never depends on scheduling.
    """
    jobs = [(plan, i, t) for i, t in plan.cells()]
    records = []
    if workers <= 1:
        for n, job in enumerate(jobs, 1):
            records.extend(_cell_job(job))
            if progress:
                progress(n, len(jobs))
    else:
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            for n, cell in enumerate(pool.map(_cell_job, jobs), 1):
                records.extend(cell)
                if progress:
                    progress(n, len(jobs))
    records.sort(key=_sort_key)
    return records


# --------------------------------------------------------------------------
# aggregation
# --------------------------------------------------------------------------

def aggregate(records):
    """Per-cell means over status-ok records: ``(nrmse_surface, mmds_surface)``.

    Cells are keyed by ``(n_s, alpha_index)``; absolute alpha differs from
    trial to trial because each reservoir has its own ITUC.
    """
    records = list(records)
    if not records:
        raise ParameterError("no records to aggregate")
    names = {r.benchmark for r in records}
    if len(names) > 1:
        raise ParameterError(f"records mix benchmarks {sorted(names)}")
    sizes = tuple(sorted({r.n_s for r in records}))
    k = max(r.alpha_index for r in records)
    sums = np.zeros((2, len(sizes), k))
    count = np.zeros((len(sizes), k), dtype=int)
    for r in records:
        if not r.ok:
            continue
        i, j = sizes.index(r.n_s), r.alpha_index - 1
        sums[0, i, j] += r.nrmse
        sums[1, i, j] += r.mmds
        count[i, j] += 1
    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(count > 0, sums / np.maximum(count, 1), np.nan)
    return (SurfaceGrid(sizes, k, means[0], count, "nrmse"),
            SurfaceGrid(sizes, k, means[1], count.copy(), "mmds"))


# --------------------------------------------------------------------------
# file formats
# --------------------------------------------------------------------------

def _fmt(x):
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else format_float(x)


def results_csv_text(records):
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(RESULTS_HEADER)
    for r in records:
        w.writerow([r.benchmark, r.n_s, r.size_index, r.alpha_index, r.trial_index, r.seed,
                    _fmt(r.alpha), _fmt(r.eta), _fmt(r.rho), _fmt(r.nrmse), _fmt(r.mmds),
                    r.status])
    return out.getvalue()


def write_results_csv(records, path):
    atomic_write_text(path, results_csv_text(records))


def parse_results_csv(text):
    """Records from results CSV text; raises ``ParameterError`` naming the bad row."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != RESULTS_HEADER:
        raise ParameterError(f"row 1: expected header {','.join(RESULTS_HEADER)}")

    def num(s):
        return math.nan if s == "" else float(s)

    records = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        try:
            if len(row) != len(RESULTS_HEADER):
                raise ValueError(f"expected {len(RESULTS_HEADER)} fields, got {len(row)}")
            status = row[11]
            if status not in (STATUS_OK, STATUS_DEGENERATE_MMDS, STATUS_NON_CONVERGED):
                raise ValueError(f"unknown status {status!r}")
            rec = SweepRecord(row[0], int(row[1]), int(row[2]), int(row[3]), int(row[4]),
                              int(row[5]), num(row[6]), num(row[7]), num(row[8]),
                              num(row[9]), num(row[10]), status)
            if rec.ok and (math.isnan(rec.nrmse) or math.isnan(rec.mmds)):
                raise ValueError("ok record with missing measurement")
            if rec.alpha_index < 1:
                raise ValueError("alpha_index must be >= 1")
        except ValueError as exc:
            raise ParameterError(f"row {lineno}: {exc}") from exc
        records.append(rec)
    return records


def read_results_csv(path):
    with open(path, encoding="utf-8") as fh:
        return parse_results_csv(fh.read())


def surface_csv_text(nrmse_grid, mmds_grid):
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(SURFACE_HEADER)
    for i, n_s in enumerate(nrmse_grid.sizes):
        for j in range(nrmse_grid.k_alphas):
            w.writerow([n_s, j + 1, _fmt(float(nrmse_grid.mean[i, j])),
                        _fmt(float(mmds_grid.mean[i, j])), int(nrmse_grid.count[i, j])])
    return out.getvalue()


def gnuplot_matrix_text(grid):
    """``matrix nonuniform`` layout: alpha indices across, one row per size."""
    lines = [f"# {grid.metric} mean over trials; rows n_s, columns alpha_index; NaN = missing"]
    lines.append(" ".join([str(grid.k_alphas)] + [str(j) for j in range(1, grid.k_alphas + 1)]))
    for i, n_s in enumerate(grid.sizes):
        vals = ["NaN" if np.isnan(v) else format_float(v) for v in grid.mean[i]]
        lines.append(" ".join([str(n_s)] + vals))
    return "\n".join(lines) + "\n"


def summary_lines(records, nrmse_grid):
    ok = sum(r.ok for r in records)
    lines = [f"records: {len(records)}  valid: {ok}  failed: {len(records) - ok}"]
    for i, n_s in enumerate(nrmse_grid.sizes):
        row = nrmse_grid.mean[i]
        if np.all(np.isnan(row)):
            lines.append(f"n_s={n_s}: no valid cells")
            continue
        j = int(np.nanargmin(row))
        lines.append(f"n_s={n_s}: best alpha_index={j + 1} mean_nrmse={row[j]:.6g} "
                     f"(n={nrmse_grid.count[i, j]})")
    return lines
