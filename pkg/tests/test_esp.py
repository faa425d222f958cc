import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from esn_ituc.errors import DegenerateSpectrumError, ParameterError, ShapeError
from esn_ituc.esp import Regime, SpectralBounds, classify_alpha, compute_bounds, ituc_grid
from esn_ituc.rng import Stream


def reservoir(n, seed):
    return Stream(seed).uniform(-0.5, 0.5, (n, n))


def test_scaled_identity_collapses_the_interval():
    b = compute_bounds(0.5 * np.eye(4))
    assert b.u_low == pytest.approx(2.0, rel=1e-12)
    assert b.u_high == pytest.approx(2.0, rel=1e-12)
    assert classify_alpha(b, 2.0) is Regime.ITUC


def test_nilpotent_has_no_upper_bound():
    with pytest.raises(DegenerateSpectrumError):
        compute_bounds([[0.0, 1.0], [0.0, 0.0]])


def test_needs_square():
    with pytest.raises(ShapeError):
        compute_bounds(np.ones((2, 3)))


def test_bounds_match_numpy():
    w = reservoir(40, 3)
    b = compute_bounds(w)
    assert b.eta == pytest.approx(np.linalg.norm(w, 2), rel=1e-8)
    assert b.rho == pytest.approx(np.max(np.abs(np.linalg.eigvals(w))), rel=1e-8)
    assert b.u_low <= b.u_high


class TestGrid:
    def test_ten_points_on_unit_interval(self):
        grid = ituc_grid(SpectralBounds(eta=1.0, rho=0.5), 10)
        np.testing.assert_allclose(grid, 1 + np.arange(10) / 9, rtol=0, atol=1e-15)
        assert grid[0] == 1.0 and grid[-1] == 2.0

    def test_two_points_are_the_bounds(self):
        b = SpectralBounds(eta=3.0, rho=1.7)
        np.testing.assert_array_equal(ituc_grid(b, 2), [b.u_low, b.u_high])

    def test_degenerate_interval(self):
        grid = ituc_grid(SpectralBounds(eta=2.0, rho=2.0), 5)
        assert np.all(grid == 0.5)

    @pytest.mark.parametrize("k", [0, 1, 2.5])
    def test_too_few_points(self, k):
        with pytest.raises(ParameterError):
            ituc_grid(SpectralBounds(eta=1.0, rho=0.5), k)

    def test_strictly_increasing(self):
        grid = ituc_grid(compute_bounds(reservoir(30, 1)), 10)
        assert np.all(np.diff(grid) > 0)


class TestClassify:
    b = SpectralBounds(eta=1.0, rho=0.5)

    @pytest.mark.parametrize("alpha, regime", [
        (0.5, Regime.SUFFICIENT),
        (1.0, Regime.ITUC),
        (1.5, Regime.ITUC),
        (2.0, Regime.ITUC),
        (2.5, Regime.NECESSARY_VIOLATED),
    ])
    def test_examples(self, alpha, regime):
        assert classify_alpha(self.b, alpha) is regime

    def test_nonpositive_alpha(self):
        with pytest.raises(ParameterError):
            classify_alpha(self.b, 0.0)

    def test_str(self):
        assert str(Regime.NECESSARY_VIOLATED) == "NECESSARY_VIOLATED"


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 60), st.integers(0, 2**32 - 1), st.integers(2, 30))
def test_grid_always_inside_ituc(n, seed, k):
    b = compute_bounds(reservoir(n, seed))
    assert all(classify_alpha(b, a) is Regime.ITUC for a in ituc_grid(b, k))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.05, 20.0))
def test_bounds_scale_inversely(seed, c):
    w = reservoir(15, seed)
    b, bc = compute_bounds(w), compute_bounds(c * w)
    assert bc.u_low == pytest.approx(b.u_low / c, rel=1e-8)
    assert bc.u_high == pytest.approx(b.u_high / c, rel=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.01, 10.0), st.floats(0.01, 10.0))
def test_classification_is_monotone(seed, a1, a2):
    b = compute_bounds(reservoir(10, seed))
    order = [Regime.SUFFICIENT, Regime.ITUC, Regime.NECESSARY_VIOLATED]
    lo, hi = sorted((a1, a2))
    assert order.index(classify_alpha(b, lo)) <= order.index(classify_alpha(b, hi))


def test_upper_bound_shrinks_with_size():
    means = [np.mean([compute_bounds(reservoir(n, s)).u_high for s in range(5)])
             for n in (20, 100, 500)]
    assert means[0] > means[1] > means[2]
