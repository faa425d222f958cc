"""Benchmark series: Mackey-Glass, noisy MSO, Lorenz, Rossler and Henon.

Every generator is a deterministic function of its arguments. Flows are
integrated with classical fourth-order Runge-Kutta on plain Python floats
(cheaper than numpy for 3-vectors) and returned as ``(T, dim)`` arrays
wrapped in :class:`TimeSeries`.
"""
import io
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateRangeError, DivergenceError, ParameterError, ShapeError
from .rng import Stream

BENCHMARKS = ("mackey_glass", "mso", "lorenz", "rossler", "henon")


@dataclass
class TimeSeries:
    """Ordered samples of a (possibly multivariate) real sequence.

    ``values`` has shape ``(T, dim)``; map-based series use ``dt = 1``.
    """

    values: np.ndarray
    dt: float = 1.0
    name: str = ""
    seed: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2:
            raise ShapeError(f"series values must be 1-D or 2-D, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ParameterError("series contains NaN or Inf")
        self.values = v

    @property
    def dim(self):
        return self.values.shape[1]

    def __len__(self):
        return self.values.shape[0]

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return self.with_values(self.values[idx])
        return self.values[idx]

    def with_values(self, values):
        return TimeSeries(values, dt=self.dt, name=self.name, seed=self.seed, meta=dict(self.meta))


@dataclass(frozen=True)
class SplitSpec:
    n_train: int
    n_test: int
    washout: int = 0

    def __post_init__(self):
        if self.n_train <= 0 or self.n_test <= 0:
            raise ParameterError("n_train and n_test must be positive")
        if self.washout < 0 or self.n_train <= self.washout:
            raise ParameterError("need 0 <= washout < n_train")


# --------------------------------------------------------------------------
# integrators
# --------------------------------------------------------------------------

def rk4_step(f, state, dt):
    """One classical Runge-Kutta step of ``state' = f(state)`` on tuples."""
    k1 = f(state)
    k2 = f(tuple(s + 0.5 * dt * k for s, k in zip(state, k1)))
    k3 = f(tuple(s + 0.5 * dt * k for s, k in zip(state, k2)))
    k4 = f(tuple(s + dt * k for s, k in zip(state, k3)))
    return tuple(
        s + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d)
        for s, a, b, c, d in zip(state, k1, k2, k3, k4)
    )


def integrate(f, state0, dt, n_steps):
    """States after ``1..n_steps`` RK4 steps, as an ``(n_steps, dim)`` array."""
    out = np.empty((n_steps, len(state0)))
    state = tuple(float(s) for s in state0)
    for i in range(n_steps):
        state = rk4_step(f, state, dt)
        out[i] = state
    return out


def lorenz_field(sigma=10.0, r=28.0, b=8.0 / 3.0):
    def f(s):
        x, y, z = s
        return (sigma * (y - x), r * x - y - x * z, x * y - b * z)
    return f


def rossler_field(r=0.15, b=0.20, c=10.0):
    def f(s):
        x, y, z = s
        return (-z - y, x + r * y, b + z * (x - c))
    return f


# --------------------------------------------------------------------------
# generators
# --------------------------------------------------------------------------

def _check_count(n):
    if int(n) != n or n <= 0:
        raise ParameterError(f"sample count must be a positive integer, got {n}")
    return int(n)


def gen_mackey_glass(n, tau=17.0, dt=0.1, history_init=1.2, seed=0, sample_every=1,
                     burn_in=None):
    """Mackey-Glass delay equation ``u' = 0.2 u(t-tau) / (1 + u(t-tau)^10) - 0.1 u``.

    RK4 with step ``dt``; the delayed value sits in a circular buffer of
    ``tau/dt + 1`` past grid values, and the half-step lookups RK4 needs are
    linear interpolations between neighbouring entries. The buffer starts
    filled with ``history_init``. ``burn_in`` steps (default ``10 tau/dt``)
    are discarded, after which every ``sample_every``-th step is kept.

    ``seed`` does not affect the (deterministic) trajectory; it is carried as
    metadata so that all benchmarks share one call shape.
    """
    n = _check_count(n)
    if not (dt > 0 and tau > 0):
        raise ParameterError("tau and dt must be positive")
    lag = tau / dt
    d = int(round(lag))
    if abs(lag - d) > 1e-9 * max(1.0, lag) or d < 1:
        raise ParameterError(f"tau/dt must be a positive integer, got {lag}")
    if sample_every < 1:
        raise ParameterError("sample_every must be >= 1")
    if burn_in is None:
        burn_in = 10 * d

    def f(u, u_lag):
        return 0.2 * u_lag / (1.0 + u_lag ** 10) - 0.1 * u

    # buf[(k) % (d+1)] holds u at step k; u(t - tau) at step k is buf[(k - d)].
    size = d + 1
    buf = [float(history_init)] * size
    u = float(history_init)
    k = 0
    total = burn_in + n * sample_every
    out = np.empty(n)
    j = 0
    for step in range(total):
        lag0 = buf[(k - d) % size]
        lag1 = buf[(k - d + 1) % size]
        lag_half = 0.5 * (lag0 + lag1)
        k1 = f(u, lag0)
        k2 = f(u + 0.5 * dt * k1, lag_half)
        k3 = f(u + 0.5 * dt * k2, lag_half)
        k4 = f(u + dt * k3, lag1)
        u = u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        k += 1
        buf[k % size] = u
        if step >= burn_in and (step - burn_in) % sample_every == sample_every - 1:
            out[j] = u
            j += 1
    return TimeSeries(out, dt=dt * sample_every, name="mackey_glass", seed=seed,
                      meta={"tau": tau, "integration_dt": dt})


def gen_mso(n, noise_variance=0.01, seed=0):
    """``sin(0.2 t) + sin(0.311 t) + z`` for ``t = 1..n``, ``z ~ N(0, noise_variance)``."""
    n = _check_count(n)
    if noise_variance < 0:
        raise ParameterError("noise_variance must be non-negative")
    t = np.arange(1, n + 1, dtype=np.float64)
    clean = np.sin(0.2 * t) + np.sin(0.311 * t)
    if noise_variance > 0:
        clean = clean + Stream(seed).normal(0.0, math.sqrt(noise_variance), n)
    return TimeSeries(clean, dt=1.0, name="mso", seed=seed,
                      meta={"noise_variance": noise_variance})


def gen_lorenz(n, dt=0.01, sigma=10.0, r=28.0, b=8.0 / 3.0, state0=(1.0, 1.0, 1.0),
               burn_in=1000):
    n = _check_count(n)
    if not dt > 0:
        raise ParameterError("dt must be positive")
    traj = integrate(lorenz_field(sigma, r, b), state0, dt, burn_in + n)
    return TimeSeries(traj[burn_in:], dt=dt, name="lorenz")


def gen_rossler(n, dt=0.05, r=0.15, b=0.20, c=10.0, state0=(0.0, 1.0, 0.0), burn_in=1000):
    n = _check_count(n)
    if not dt > 0:
        raise ParameterError("dt must be positive")
    traj = integrate(rossler_field(r, b, c), state0, dt, burn_in + n)
    return TimeSeries(traj[burn_in:], dt=dt, name="rossler")


def gen_henon(n, r=1.4, b=0.3, x0=1.0, y0=1.0):
    """x-component of the Henon map, iterates ``x_1 .. x_n`` after ``(x0, y0)``."""
    n = _check_count(n)
    out = np.empty(n)
    x, y = float(x0), float(y0)
    for i in range(n):
        x, y = 1.0 - r * x * x + y, b * x
        if not abs(x) <= 1e6:
            raise DivergenceError(f"Henon map diverged at step {i + 1}", step=i + 1)
        out[i] = x
    return TimeSeries(out, dt=1.0, name="henon")


def generate(benchmark, n, seed=0, **kwargs):
    """Dispatch by benchmark name."""
    if benchmark == "mackey_glass":
        return gen_mackey_glass(n, seed=seed, **kwargs)
    if benchmark == "mso":
        return gen_mso(n, seed=seed, **kwargs)
    if benchmark == "lorenz":
        ts = gen_lorenz(n, **kwargs)
    elif benchmark == "rossler":
        ts = gen_rossler(n, **kwargs)
    elif benchmark == "henon":
        ts = gen_henon(n, **kwargs)
    else:
        raise ParameterError(f"unknown benchmark {benchmark!r}; choose from {BENCHMARKS}")
    ts.seed = seed
    return ts


# --------------------------------------------------------------------------
# preprocessing
# --------------------------------------------------------------------------

def normalize_01(ts):
    """Affine map of every dimension onto ``[0, 1]``.

    Returns ``(normalized, ranges)`` where ``ranges`` is a ``(dim, 2)`` array
    of the original ``(min, max)`` pairs.
    """
    lo = ts.values.min(axis=0)
    hi = ts.values.max(axis=0)
    span = hi - lo
    if np.any(span == 0):
        bad = np.flatnonzero(span == 0).tolist()
        raise DegenerateRangeError(f"constant dimension(s) {bad} cannot be normalized")
    v = (ts.values - lo) / span
    # pin the extremes exactly; (x - lo) / span can miss 1.0 by an ulp
    v[ts.values == lo] = 0.0
    v[ts.values == hi] = 1.0
    return ts.with_values(v), np.column_stack([lo, hi])


def denormalize(ts, ranges):
    ranges = np.asarray(ranges)
    return ts.with_values(ts.values * (ranges[:, 1] - ranges[:, 0]) + ranges[:, 0])


def split(ts, spec):
    """Contiguous ``(train, test)`` split preserving temporal order."""
    if spec.n_train + spec.n_test > len(ts):
        raise ParameterError(
            f"series has {len(ts)} samples, split needs {spec.n_train + spec.n_test}"
        )
    return ts[: spec.n_train], ts[spec.n_train: spec.n_train + spec.n_test]


# --------------------------------------------------------------------------
# CSV
# --------------------------------------------------------------------------

def format_float(x):
    return repr(float(x))


def to_csv_text(ts):
    lines = [f"# benchmark={ts.name} dt={format_float(ts.dt)} seed={ts.seed}"]
    for row in ts.values:
        lines.append(",".join(format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def atomic_write_text(path, text):
    """Write ``text`` to ``path`` via a temporary file and ``os.replace``."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(ts, path):
    atomic_write_text(path, to_csv_text(ts))


def read_csv(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_csv_text(text)


def parse_csv_text(text):
    buf = io.StringIO(text)
    header = buf.readline()
    if not header.startswith("#"):
        raise ParameterError("series CSV must start with a '# benchmark=...' header")
    meta = dict(tok.split("=", 1) for tok in header[1:].split() if "=" in tok)
    rows = [line for line in buf.read().splitlines() if line.strip()]
    values = np.array([[float(x) for x in line.split(",")] for line in rows])
    return TimeSeries(values, dt=float(meta.get("dt", 1.0)), name=meta.get("benchmark", ""),
                      seed=int(meta.get("seed", 0)))
