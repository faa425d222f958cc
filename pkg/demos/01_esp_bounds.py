"""
Echo State Property bounds of random reservoirs
===============================================

A reservoir ``W`` drawn uniformly from [-0.5, 0.5] is scaled by ``alpha``.
Below ``1/eta`` (eta = largest singular value) echo states are guaranteed;
above ``1/rho`` (rho = spectral radius) the zero-input fixed point is
unstable. Between the two sits the ITUC, which this demo measures.
"""
import numpy as np

from esn_ituc import Stream, classify_alpha, compute_bounds, ituc_grid

# %% bounds across reservoir sizes
print(f"{'n_s':>5} {'eta':>9} {'rho':>9} {'eta/rho':>8} {'u_low':>8} {'u_high':>8}")
for n_s in (20, 50, 100, 250, 500):
    w = Stream(n_s).uniform(-0.5, 0.5, (n_s, n_s))
    b = compute_bounds(w)
    print(f"{n_s:5d} {b.eta:9.4f} {b.rho:9.4f} {b.ratio:8.4f} {b.u_low:8.4f} {b.u_high:8.4f}")

# Both bounds shrink as the reservoir grows, and the gap width eta/rho
# approaches 2: the interval is about as wide as its own lower end.

# %% the scaling-factor grid used by the sweeps
w = Stream(7).uniform(-0.5, 0.5, (100, 100))
b = compute_bounds(w)
grid = ituc_grid(b, 10)
print("\nten scaling factors spanning the ITUC of a 100-unit reservoir:")
print(np.round(grid, 5))

for alpha in (0.5 * b.u_low, grid[4], 2 * b.u_high):
    print(f"alpha={alpha:.5f} -> {classify_alpha(b, alpha)}")
