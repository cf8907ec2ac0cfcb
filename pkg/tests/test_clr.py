import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from clrspline import (HistogramSample, Interval, Spline, build_space, clr_discrete,
                       clr_discrete_inverse, clr_functional, evaluate, inverse_clr_spline, load_shiw)
from clrspline.exceptions import DimensionError, DomainError
from conftest import CASE_KNOTS, MIDPOINTS
from oracles import gauss_nodes

positive = arrays(np.float64, st.integers(2, 12), elements=st.floats(1e-6, 1e3))


def refined_integral(x_fn, a, b, spans=2000, nodes=8):
    """Independent quadrature: many equal spans, unrelated to the knot layout."""
    x, w = gauss_nodes(np.linspace(a, b, spans + 1), nodes)
    return float(w @ x_fn(x))


class TestInterval:
    def test_eta(self):
        assert Interval(65.7, 110709).eta == pytest.approx(110643.3)

    def test_order(self):
        with pytest.raises(DomainError):
            Interval(1.0, 1.0)


class TestHistogramSample:
    def test_rounded_sum_accepted(self):
        s = HistogramSample(MIDPOINTS, [0.067, 0.385, 0.323, 0.134, 0.052, 0.022, 0.009, 0.005, 0.003])
        assert s.proportions.sum() == pytest.approx(1.0, abs=5e-3)

    def test_bad_sum(self):
        with pytest.raises(DomainError):
            HistogramSample(MIDPOINTS, np.full(9, 0.2))

    def test_zero_names_class(self):
        y = np.full(9, 1 / 8)
        y[4] = 0.0
        with pytest.raises(DomainError, match="class 5.*imputed"):
            HistogramSample(MIDPOINTS, y)

    def test_length(self):
        with pytest.raises(DimensionError):
            HistogramSample(MIDPOINTS, [0.5, 0.5])


class TestClrDiscrete:
    @pytest.mark.xfail(strict=True, reason="3-decimal proportions cannot resolve the log of its "
                       "smallest classes; see the acceptance report for criterion 1")
    def test_published_clr(self):
        props, published = load_shiw("proportions"), load_shiw("clr")
        assert props.labels == published.labels
        z = clr_discrete(props.values)
        assert np.abs(z - published.values).max() <= 6e-2

    @pytest.mark.xfail(strict=True, reason="Piemonte's 0.003 and 0.005 classes carry up to 17% "
                       "rounding error, which shifts every clr entry through the geometric mean")
    def test_piemonte(self):
        z = clr_discrete(load_shiw().sample(0))
        np.testing.assert_allclose(
            z, [0.587, 2.331, 2.154, 1.271, 0.331, -0.550, -1.437, -1.997, -2.690], atol=6e-2)

    def test_tables_agree_up_to_rounding(self):
        # back-transformed published clr values land inside the proportions' rounding interval,
        # up to the closure scale and the clr table's own 3-decimal rounding
        props, published = load_shiw("proportions"), load_shiw("clr")
        back = clr_discrete_inverse(published.values)
        scales = np.linspace(0.99, 1.01, 4001)
        err = np.array([np.abs(scales[:, None] * b - y).max(axis=1).min()
                        for b, y in zip(back, props.values)])
        slack = 5e-4 * (1 + 5e-4 * 9)
        outliers = {props.labels[i] for i in np.flatnonzero(err > slack)}
        assert outliers == {"Trentino", "Puglia", "Sicilia"}
        assert err.max() < 2e-3

    def test_entries_match_where_log_is_resolved(self):
        # with every class >= 0.01 the rounding moves a log by at most ~5%
        props, published = load_shiw("proportions"), load_shiw("clr")
        ok = props.values.min(axis=1) >= 0.01
        z = clr_discrete(props.values[ok])
        assert ok.sum() >= 1
        assert np.abs(z - published.values[ok]).max() <= 6e-2

    def test_uniform(self):
        np.testing.assert_array_equal(clr_discrete(np.full(9, 1 / 9)), 0.0)

    def test_rows_sum_zero(self):
        z = clr_discrete(load_shiw().values)
        assert np.abs(z.sum(axis=1)).max() <= 1e-12

    def test_non_positive(self):
        with pytest.raises(DomainError, match="class 2"):
            clr_discrete([0.5, -0.1, 0.6])

    @settings(max_examples=60, deadline=None)
    @given(positive, st.floats(1e-3, 1e3))
    def test_zero_sum_and_scale_invariance(self, y, c):
        z = clr_discrete(y)
        assert abs(z.sum()) <= 1e-12 * max(1.0, np.abs(z).max())
        np.testing.assert_allclose(clr_discrete(c * y), z, atol=1e-12 * max(1.0, np.abs(z).max()))


class TestClrDiscreteInverse:
    def test_zero(self):
        np.testing.assert_allclose(clr_discrete_inverse(np.zeros(9)), np.full(9, 1 / 9), rtol=1e-15)

    @pytest.mark.xfail(strict=True, reason="Piemonte's 0.003 class is rounded by up to 17%")
    def test_published_clr_to_proportions(self):
        props, published = load_shiw("proportions"), load_shiw("clr")
        back = clr_discrete_inverse(published.values[0])
        np.testing.assert_allclose(back, props.values[0], rtol=6e-2)

    def test_round_trip(self, rng):
        for _ in range(50):
            z = rng.normal(scale=3, size=int(rng.integers(2, 15)))
            z -= z.mean()
            np.testing.assert_allclose(clr_discrete(clr_discrete_inverse(z)), z, atol=1e-12)

    def test_overflow_guard(self):
        y = clr_discrete_inverse([1000.0, 0.0, -1000.0])
        assert np.all(np.isfinite(y)) and y.sum() == pytest.approx(1.0)

    def test_non_finite(self):
        with pytest.raises(DomainError):
            clr_discrete_inverse([np.inf, 0.0])


class TestClrFunctional:
    def test_constant(self):
        grid = np.linspace(2, 7, 101)
        np.testing.assert_allclose(clr_functional(grid, np.full(101, 1 / 5)), 0, atol=1e-15)

    def test_exponential(self):
        grid = np.linspace(0, 1, 2001)
        fc = clr_functional(grid, np.exp(grid) / (np.e - 1), Interval(0, 1))
        # the trapezoid mean of a linear function is exact
        np.testing.assert_allclose(fc, grid - 0.5, atol=1e-12)

    def test_centred(self, rng):
        grid = np.sort(np.r_[0, rng.uniform(0, 3, 200), 3])
        f = np.exp(np.sin(4 * grid) + rng.normal(scale=0.1, size=grid.size))
        assert abs(np.trapezoid(clr_functional(grid, f), grid)) <= 1e-8

    def test_non_positive(self):
        with pytest.raises(DomainError):
            clr_functional([0, 1, 2], [1.0, 0.0, 1.0])

    def test_grid_must_span_interval(self):
        with pytest.raises(DomainError):
            clr_functional([0, 1], [1.0, 1.0], Interval(0, 2))


class TestInverseClrSpline:
    def test_zero_spline(self):
        sp = build_space(**CASE_KNOTS)
        d = inverse_clr_spline(Spline(sp, np.zeros(sp.dim)))
        np.testing.assert_allclose(d.values, 1 / 110709, rtol=1e-12)
        assert d.grid.size == 500 and d.grid[0] == 0 and d.grid[-1] == 110709

    def test_unit_integral_and_positive(self, rng):
        sp = build_space(**CASE_KNOTS)
        for scale in (0.1, 3.0, 30.0):
            s = Spline(sp, rng.normal(scale=scale, size=sp.dim))
            d = inverse_clr_spline(s)
            assert np.all(d.values > 0)
            norm = refined_integral(lambda x: np.exp(evaluate(s, x)), 0, 110709)
            dens = lambda x: np.exp(evaluate(s, x)) / norm  # noqa: E731
            np.testing.assert_allclose(d.values, dens(d.grid), rtol=1e-9)
            assert refined_integral(dens, 0, 110709) == pytest.approx(1.0, abs=1e-6)

    def test_round_trip(self, rng):
        sp = build_space(a=0, b=4, interior=(1.0, 2.5), degree=3)
        s = Spline(sp, rng.normal(size=sp.dim))
        d = inverse_clr_spline(s, m=2000)
        fc = clr_functional(d.grid, d.values, Interval(0, 4))
        ref = evaluate(s, d.grid)
        ref = ref - np.trapezoid(ref, d.grid) / 4
        np.testing.assert_allclose(fc, ref, atol=1e-6)

    def test_interval_mismatch(self):
        sp = build_space(**CASE_KNOTS)
        with pytest.raises(DomainError):
            inverse_clr_spline(Spline(sp, np.zeros(sp.dim)), interval=Interval(65.7, 110709))

    def test_grid_size(self):
        sp = build_space(**CASE_KNOTS)
        with pytest.raises(DimensionError):
            inverse_clr_spline(Spline(sp, np.zeros(sp.dim)), m=10)
