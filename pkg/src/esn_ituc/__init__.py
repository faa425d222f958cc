"""Echo State Networks with reservoirs scaled inside the ITUC.

The ITUC is the interval of reservoir scaling factors between the
singular-value bound (sufficient for the Echo State Property) and the
spectral-radius bound (necessary for it).
"""
from .errors import (
    ConvergenceError,
    DegeneratePairError,
    DegenerateRangeError,
    DegenerateSpectrumError,
    DivergenceError,
    EsnError,
    ParameterError,
    ShapeError,
    SingularMatrixError,
    UntrainedModelError,
)
from .esn import (
    EsnModel,
    ReservoirConfig,
    StateTrajectory,
    harvest,
    init_model,
    load_model,
    nrmse,
    predict_free_run,
    predict_teacher_forced,
    save_model,
    train,
    update_state,
)
from .esp import Regime, SpectralBounds, classify_alpha, compute_bounds, ituc_grid
from .experiment import SurfaceGrid, SweepPlan, SweepRecord, aggregate, run_sweep, run_trial
from .linalg import largest_singular_value, mat_mul, solve_ridge, spectral_radius
from .mmds import MmdsWindow, mmds
from .rng import Stream, mix_seed
from .timeseries import (
    SplitSpec,
    TimeSeries,
    gen_henon,
    gen_lorenz,
    gen_mackey_glass,
    gen_mso,
    gen_rossler,
    normalize_01,
    split,
)

__version__ = "0.1.0"
