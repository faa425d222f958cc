"""Echo State Property bounds of a reservoir and the scaling-factor gap.

For an unscaled reservoir ``W``, ``eta`` is its largest singular value and
``rho`` its spectral radius. Scaling by ``alpha`` below ``1/eta`` guarantees
echo states; above ``1/rho`` the zero-input fixed point is unstable. The
interval ``[1/eta, 1/rho]`` in between is the ITUC, where neither condition
decides.
"""
import enum
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DegenerateSpectrumError, ParameterError, ShapeError


class Regime(str, enum.Enum):
    SUFFICIENT = "SUFFICIENT"
    ITUC = "ITUC"
    NECESSARY_VIOLATED = "NECESSARY_VIOLATED"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SpectralBounds:
    eta: float
    rho: float

    @property
    def u_low(self):
        return 1.0 / self.eta

    @property
    def u_high(self):
        return 1.0 / self.rho

    @property
    def ratio(self):
        return self.eta / self.rho


def compute_bounds(w_r_initial, tol=linalg.DEFAULT_TOL):
    w = linalg.as_matrix(w_r_initial)
    if w.shape[0] != w.shape[1]:
        raise ShapeError(f"reservoir must be square, got {w.shape}")
    rho = linalg.spectral_radius(w, tol)
    if rho == 0.0:
        raise DegenerateSpectrumError("spectral radius is zero; the ITUC is unbounded")
    eta = linalg.largest_singular_value(w, tol)
    # eta >= rho holds exactly; guard against last-bit disagreement between the
    # two iterative routes when the matrix is normal.
    eta = max(eta, rho)
    return SpectralBounds(eta=eta, rho=rho)


def ituc_grid(bounds, k):
    """``k`` evenly spaced scaling factors from ``u_low`` to ``u_high`` inclusive."""
    if int(k) != k or k < 2:
        raise ParameterError("grid needs at least two points")
    grid = np.linspace(bounds.u_low, bounds.u_high, int(k))
    # linspace endpoints are exact, interior points can stray by an ulp
    return np.clip(grid, bounds.u_low, bounds.u_high)


def classify_alpha(bounds, alpha):
    if not alpha > 0:
        raise ParameterError("alpha must be positive")
    # Compare against the reciprocals that define the grid so that grid
    # endpoints classify consistently despite rounding in alpha * eta.
    if alpha < bounds.u_low:
        return Regime.SUFFICIENT
    if alpha > bounds.u_high:
        return Regime.NECESSARY_VIOLATED
    return Regime.ITUC
