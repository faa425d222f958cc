"""Mean multidimensional scaling distance between input and state geometry.

For a window of ``n`` time steps, with ``L(i, j)`` the Euclidean distance
between inputs and ``D(i, j)`` between reservoir states,

    MMDS = (1 / n) * sum_{i < j} (L(i, j) - D(i, j))**2 / D(i, j)

Each unordered pair is counted once and the sum is divided by the number
of time steps, not by the number of pairs.
"""
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from .errors import DegeneratePairError, ParameterError, ShapeError
from .timeseries import TimeSeries

PAIR_CONVENTION = "unordered"


@dataclass(frozen=True)
class MmdsWindow:
    start: int
    length: int

    def __post_init__(self):
        if self.start < 0 or self.length < 1:
            raise ParameterError("window needs start >= 0 and length >= 1")

    @classmethod
    def last(cls, total, length):
        """The final ``length`` steps of a sequence of ``total`` steps."""
        length = min(length, total)
        return cls(total - length, length)


def mmds(inputs, states, window):
    """MMDS over ``window`` for aligned ``inputs`` (T x n_a) and ``states``.

    ``states`` may be a ``StateTrajectory`` (columns are states) or a
    ``(T, n_s)`` array. Indices are relative to the aligned sequences.
    """
    a = inputs.values if isinstance(inputs, TimeSeries) else np.asarray(inputs, dtype=np.float64)
    a = a.reshape(len(a), -1)
    s = states.states.T if hasattr(states, "states") else np.asarray(states, dtype=np.float64)
    s = s.reshape(len(s), -1)
    if len(a) != len(s):
        raise ShapeError(f"{len(a)} inputs but {len(s)} states")
    stop = window.start + window.length
    if stop > len(a):
        raise ParameterError(f"window [{window.start}, {stop}) exceeds {len(a)} steps")
    if window.length < 2:
        return 0.0
    ai = a[window.start:stop]
    si = s[window.start:stop]
    big_l = pdist(ai)
    big_d = pdist(si)
    zero = np.flatnonzero(big_d == 0.0)
    if zero.size:
        iu, ju = np.triu_indices(window.length, k=1)
        pairs = [(int(window.start + iu[z]), int(window.start + ju[z])) for z in zero[:10]]
        raise DegeneratePairError(f"coinciding reservoir states at {pairs}", pairs)
    return float(np.sum((big_l - big_d) ** 2 / big_d) / window.length)
