"""Canonical Echo State Network.

The reservoir update is ``s(t+1) = tanh(w_in [a(t+1); 1] + w_r s(t))`` with a
dense reservoir ``w_r = alpha * w_r_initial``; the linear readout
``y(t) = w_out s(t)`` has no bias and is fitted by ridge regression.
"""
import json
import warnings
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import linalg
from .errors import DegenerateRangeError, ParameterError, ShapeError, UntrainedModelError
from .rng import Stream
from .timeseries import TimeSeries, atomic_write_text


@dataclass(frozen=True)
class ReservoirConfig:
    n_s: int
    n_a: int = 1
    n_b: int = 1
    init_low: float = -0.5
    init_high: float = 0.5
    alpha: float = 1.0
    gamma: float = 1e-4
    washout: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.n_s < 1 or self.n_a < 1 or self.n_b < 1:
            raise ParameterError("n_s, n_a and n_b must be positive")
        if not self.init_low < self.init_high:
            raise ParameterError("init_low must be smaller than init_high")
        if not self.alpha > 0:
            raise ParameterError("alpha must be positive")
        if self.gamma < 0:
            raise ParameterError("gamma must be non-negative")
        if self.washout < 0:
            raise ParameterError("washout must be non-negative")
        if self.n_s < self.n_a:
            warnings.warn(f"reservoir ({self.n_s}) is smaller than the input dimension "
                          f"({self.n_a})", stacklevel=3)


@dataclass
class EsnModel:
    """Weights of one network.

    ``w_in`` is ``n_s x (n_a + 1)`` with the bias weights in the last
    column; ``w_r`` is always ``config.alpha * w_r_initial``.
    """

    config: ReservoirConfig
    w_in: np.ndarray
    w_r_initial: np.ndarray
    w_r: np.ndarray
    w_out: np.ndarray = None

    @property
    def trained(self):
        return self.w_out is not None

    def with_alpha(self, alpha):
        """Untrained copy sharing ``w_in`` and ``w_r_initial``, rescaled by ``alpha``."""
        config = replace(self.config, alpha=float(alpha))
        return EsnModel(config, self.w_in, self.w_r_initial, config.alpha * self.w_r_initial)


@dataclass
class StateTrajectory:
    """Reservoir states, one column per time step.

    Column ``t`` is the state after the ``t+1``-th input; columns before
    ``t_offset`` belong to the washout.
    """

    states: np.ndarray
    t_offset: int = 0

    @property
    def harvested(self):
        return self.states[:, self.t_offset:]

    @property
    def final(self):
        return self.states[:, -1]

    def __len__(self):
        return self.states.shape[1]


def init_model(config):
    """Draw a dense network; returns ``(model, w_r_initial)``.

    The reservoir is drawn first, then the input weights, both uniform on
    ``[init_low, init_high)`` from ``Stream(config.seed)``.
    """
    stream = Stream(config.seed)
    w_r_initial = stream.uniform(config.init_low, config.init_high, (config.n_s, config.n_s))
    w_in = stream.uniform(config.init_low, config.init_high, (config.n_s, config.n_a + 1))
    model = EsnModel(config, w_in, w_r_initial, config.alpha * w_r_initial)
    return model, w_r_initial


def _inputs_array(inputs, n_a):
    a = inputs.values if isinstance(inputs, TimeSeries) else np.asarray(inputs, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None] if n_a == 1 else a[None, :]
    if a.shape[1] != n_a:
        raise ShapeError(f"inputs have dimension {a.shape[1]}, model expects {n_a}")
    return a


def update_state(model, s, a):
    s = np.asarray(s, dtype=np.float64)
    a = np.atleast_1d(np.asarray(a, dtype=np.float64))
    if s.shape != (model.config.n_s,) or a.shape != (model.config.n_a,):
        raise ShapeError("state or input has the wrong length")
    return np.tanh(model.w_in[:, :-1] @ a + model.w_in[:, -1] + model.w_r @ s)


def _run(model, a, s0):
    n_s = model.config.n_s
    drive = a @ model.w_in[:, :-1].T + model.w_in[:, -1]
    out = np.empty((a.shape[0], n_s))
    s = np.zeros(n_s) if s0 is None else np.asarray(s0, dtype=np.float64)
    if s.shape != (n_s,):
        raise ShapeError(f"initial state must have length {n_s}")
    w_r = model.w_r
    for t in range(a.shape[0]):
        s = np.tanh(drive[t] + w_r @ s)
        out[t] = s
    return out.T


def harvest(model, inputs, s0=None):
    """Drive the reservoir from ``s0`` (zeros by default) and record every state."""
    a = _inputs_array(inputs, model.config.n_a)
    if a.shape[0] <= model.config.washout:
        raise ParameterError(
            f"{a.shape[0]} inputs leave nothing after a washout of {model.config.washout}"
        )
    return StateTrajectory(_run(model, a, s0), model.config.washout)


def train(model, inputs, targets):
    """Fit ``w_out`` by ridge regression on post-washout states; returns ``model``."""
    b = _inputs_array(targets, model.config.n_b)
    traj = harvest(model, inputs)
    if b.shape[0] != len(traj):
        raise ShapeError(f"{len(traj)} inputs but {b.shape[0]} targets")
    model.w_out = linalg.solve_ridge(traj.harvested, b[traj.t_offset:].T, model.config.gamma)
    return model


def _require_trained(model):
    if not model.trained:
        raise UntrainedModelError("model has no readout; call train() first")


def predict_teacher_forced(model, inputs, s0=None):
    """One output per post-washout input, with ground-truth inputs throughout."""
    _require_trained(model)
    traj = harvest(model, inputs, s0)
    y = (model.w_out @ traj.harvested).T
    return TimeSeries(y, name="prediction")


def predict_free_run(model, warmup, horizon, s0=None):
    """Closed-loop forecast of ``horizon`` steps after driving with ``warmup``.

    The warmup run starts from ``s0`` (zeros by default). The first
    prediction is the readout of the last warmup state; each prediction is
    then fed back as the next input.
    """
    _require_trained(model)
    cfg = model.config
    if cfg.n_a != cfg.n_b:
        raise ShapeError("free-run prediction needs n_a == n_b")
    a = _inputs_array(warmup, cfg.n_a)
    if a.shape[0] < 1:
        raise ParameterError("warmup must contain at least one sample")
    if horizon < 0:
        raise ParameterError("horizon must be non-negative")
    out = np.empty((horizon, cfg.n_b))
    if horizon == 0:
        return TimeSeries(out, name="prediction")
    s = _run(model, a, s0)[:, -1]
    w_in, bias, w_r, w_out = model.w_in[:, :-1], model.w_in[:, -1], model.w_r, model.w_out
    for t in range(horizon):
        y = w_out @ s
        out[t] = y
        s = np.tanh(w_in @ y + bias + w_r @ s)
    return TimeSeries(out, name="prediction")


def nrmse(y, b):
    """Root mean squared error normalized by the target's spread about its mean.

    Errors are Euclidean norms per time step, so multivariate series are
    scored jointly. Predicting the target mean scores exactly 1.
    """
    y = y.values if isinstance(y, TimeSeries) else np.asarray(y, dtype=np.float64)
    b = b.values if isinstance(b, TimeSeries) else np.asarray(b, dtype=np.float64)
    y = y.reshape(len(y), -1)
    b = b.reshape(len(b), -1)
    if y.shape != b.shape:
        raise ShapeError(f"prediction {y.shape} and target {b.shape} differ")
    denom = np.mean(np.sum((b - b.mean(axis=0)) ** 2, axis=1))
    if denom == 0:
        raise DegenerateRangeError("target is constant; NRMSE is undefined")
    num = np.mean(np.sum((b - y) ** 2, axis=1))
    return float(np.sqrt(num / denom))


# --------------------------------------------------------------------------
# persistence
# --------------------------------------------------------------------------

def model_to_dict(model):
    return {
        "config": asdict(model.config),
        "w_in": model.w_in.tolist(),
        "w_r_initial": model.w_r_initial.tolist(),
        "w_r": model.w_r.tolist(),
        "w_out": None if model.w_out is None else model.w_out.tolist(),
    }


def model_from_dict(doc):
    config = ReservoirConfig(**doc["config"])
    w_out = doc.get("w_out")
    model = EsnModel(
        config,
        np.array(doc["w_in"], dtype=np.float64),
        np.array(doc["w_r_initial"], dtype=np.float64),
        np.array(doc["w_r"], dtype=np.float64),
        None if w_out is None else np.array(w_out, dtype=np.float64),
    )
    if model.w_r.shape != (config.n_s, config.n_s) or model.w_in.shape != (config.n_s, config.n_a + 1):
        raise ShapeError("stored weights do not match the stored config")
    return model


def save_model(model, path):
    atomic_write_text(path, json.dumps(model_to_dict(model)))


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
