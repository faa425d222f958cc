"""Seeded random streams with a stable bit-level contract.

Uniform doubles are built from the raw 64-bit output of numpy's PCG64 bit
generator (whose raw stream numpy keeps fixed across releases) with an
explicit ``(x >> 11) * 2**-53`` conversion, and Gaussians come from our own
Box-Muller transform. Nothing here depends on ``Generator`` methods, whose
streams numpy does not promise to preserve.
"""
import numpy as np

_MASK64 = (1 << 64) - 1
_TWO_POW_M53 = 2.0 ** -53


def splitmix64(x):
    """One splitmix64 step: advance ``x`` by the golden gamma and finalize."""
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix_seed(*parts):
    """Fold integers into one 64-bit seed.

    Each part is xored into the running state, which is then passed through
    ``splitmix64``; the result depends on the order of ``parts``.
    """
    h = 0x6A09E667F3BCC909
    for p in parts:
        h = splitmix64(h ^ (int(p) & _MASK64))
    return h


class Stream:
    """A reproducible source of uniforms and Gaussians.

    Parameters
    ----------
    seed : int
        Any Python integer; reduced modulo 2**64.
    """

    def __init__(self, seed):
        self.seed = int(seed) & _MASK64
        self._bits = np.random.PCG64(self.seed)

    def raw(self, n):
        return self._bits.random_raw(n)

    def uniform(self, low=0.0, high=1.0, size=1):
        """Uniform doubles on ``[low, high)`` with 53 random bits each."""
        shape = (size,) if np.isscalar(size) else tuple(size)
        n = int(np.prod(shape))
        u = (self.raw(n) >> np.uint64(11)).astype(np.float64) * _TWO_POW_M53
        return (low + (high - low) * u).reshape(shape)

    def normal(self, mean=0.0, std=1.0, size=1):
        """Gaussian samples via the Box-Muller transform.

        Uniform pairs ``(u1, u2)`` give ``sqrt(-2 ln u1) * cos(2 pi u2)`` and
        the matching sine; both are used, so ``n`` samples consume
        ``2 * ceil(n / 2)`` uniforms.
        """
        shape = (size,) if np.isscalar(size) else tuple(size)
        n = int(np.prod(shape))
        m = (n + 1) // 2
        u = self.uniform(size=2 * m)
        u1 = 1.0 - u[0::2]  # (0, 1], keeps log finite
        u2 = u[1::2]
        r = np.sqrt(-2.0 * np.log(u1))
        z = np.empty(2 * m)
        z[0::2] = r * np.cos(2.0 * np.pi * u2)
        z[1::2] = r * np.sin(2.0 * np.pi * u2)
        return (mean + std * z[:n]).reshape(shape)
