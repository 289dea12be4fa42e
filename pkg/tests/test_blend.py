import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localspline.blend import (
    BlendedSpline,
    apply_blend,
    build_blend,
    eval_spline,
    eval_spline_deriv,
    interpolate,
    union_knots,
)
from localspline.bspline import SplineFunction
from localspline.data import DIVIDED_DIFFERENCE, EXACT, HermiteData, divided_difference_derivs
from localspline.errors import DataLengthError, DomainError, GridTooSmallError, OrderTooSmallError
from support import dd_data, exact_data, jittered_grid, monomial, sine

grids = st.tuples(st.integers(3, 5), st.integers(0, 14), st.integers(0, 2**31))


def grid_for(m, extra, seed):
    return jittered_grid(3 * m - 3 + extra, np.random.default_rng(seed))


class TestDividedDifferences:
    def test_exact_on_matching_polynomials(self):
        y = jittered_grid(8, np.random.default_rng(0))
        da, db = divided_difference_derivs(y, y**2, 3)
        assert da[1] == pytest.approx(2.0, rel=1e-12) and db[1] == pytest.approx(2.0, rel=1e-12)
        da, db = divided_difference_derivs(y, y, 3)
        assert da[0] == pytest.approx(1.0, rel=1e-14) and db[0] == pytest.approx(1.0, rel=1e-14)

    def test_first_order_linear_convergence(self):
        errs = []
        for N in (20, 40, 80, 160):
            y = np.linspace(0, 1, N + 1)
            # shifted so the second derivative at the end is nonzero
            da, _ = divided_difference_derivs(y, np.sin(y + 0.5), 3)
            errs.append(abs(da[0] - np.cos(0.5)))
        ratios = np.array(errs[:-1]) / np.array(errs[1:])
        assert np.all((ratios > 1.8) & (ratios < 2.2))

    def test_too_few_samples(self):
        with pytest.raises(GridTooSmallError):
            divided_difference_derivs([0.0, 1.0, 2.0], [0.0, 1.0, 4.0], 4)

    def test_provenance(self):
        y = np.linspace(0, 1, 10)
        assert HermiteData.from_samples(y, y, 3).provenance == DIVIDED_DIFFERENCE
        assert HermiteData.from_samples(y, y, 3, [1, 0], [1, 0]).provenance == EXACT
        with pytest.raises(DataLengthError):
            HermiteData.from_samples(y, y, 3, [1, 0], None)


class TestBuild:
    def test_success_and_errors(self):
        build_blend(np.linspace(0, 1, 11), 3)
        with pytest.raises(GridTooSmallError):
            build_blend(np.linspace(0, 1, 9), 4)
        with pytest.raises(OrderTooSmallError):
            build_blend(np.linspace(0, 1, 11), 2)

    def test_length_mismatch(self):
        op = build_blend(np.linspace(0, 1, 11), 3)
        with pytest.raises(DataLengthError):
            apply_blend(op, np.zeros(5))
        with pytest.raises(DataLengthError):
            interpolate(np.linspace(0, 1, 11), np.zeros(5))


class TestConditions:
    @given(grids)
    @settings(max_examples=30, deadline=None)
    def test_polynomial_reproduction(self, args):
        m, extra, seed = args
        y = grid_for(m, extra, seed)
        op = build_blend(y, m)
        xs = np.linspace(0, 1, 1000)
        for deg in range(m):
            p = monomial(deg)
            assert np.max(np.abs(apply_blend(op, exact_data(y, m, p))(xs) - p(xs))) <= 1e-8

    @given(grids)
    @settings(max_examples=30, deadline=None)
    def test_interpolation_and_hermite_conditions(self, args):
        m, extra, seed = args
        y = grid_for(m, extra, seed)
        rng = np.random.default_rng(seed)
        op = build_blend(y, m)
        values = rng.normal(size=y.size)
        for data in (HermiteData.from_samples(y, values, m), exact_data(y, m, sine)):
            s = apply_blend(op, data)
            assert np.max(np.abs(s(y) - data.values)) <= 1e-9 * max(1, np.max(np.abs(data.values)))
            for l in range(1, m):
                da, db = data.derivs_a[l - 1], data.derivs_b[l - 1]
                assert abs(s.derivative(y[0], l) - da) <= 1e-7 * (abs(da) + 1)
                assert abs(s.derivative(y[-1], l) - db) <= 1e-7 * (abs(db) + 1)

    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_locality(self, m):
        N = 8 * m
        y = jittered_grid(N, np.random.default_rng(m))
        op = build_blend(y, m)
        base = np.random.default_rng(1).normal(size=N + 1)
        xs = np.linspace(0, 1, 4001)
        for i in (1, N // 2, N - 1):
            bumped = base.copy()
            bumped[i] += 1.0
            d = apply_blend(op, HermiteData.from_samples(y, bumped, m, np.zeros(m - 1), np.zeros(m - 1)))(xs)
            d0 = apply_blend(op, HermiteData.from_samples(y, base, m, np.zeros(m - 1), np.zeros(m - 1)))(xs)
            lo, hi = y[max(0, i - 2 * m)], y[min(N, i + 2 * m)]
            outside = (xs < lo) | (xs > hi)
            assert np.all(d[outside] == d0[outside])
            assert np.max(np.abs(d - d0)) > 0.1

    @pytest.mark.parametrize("m", [3, 4])
    def test_idempotent_on_samples(self, m):
        y = jittered_grid(14, np.random.default_rng(m))
        op = build_blend(y, m)
        s = apply_blend(op, exact_data(y, m, sine))
        again = HermiteData(
            s(y),
            [s.derivative(y[0], l) for l in range(1, m)],
            [s.derivative(y[-1], l) for l in range(1, m)],
        )
        assert np.max(np.abs(apply_blend(op, again)(y) - s(y))) <= 1e-9

    def test_defaults_use_divided_differences(self):
        y = np.linspace(0, 1, 13)
        s = interpolate(y, np.sin(y), m=4)
        expected = apply_blend(build_blend(y, 4), dd_data(y, 4, sine))
        xs = np.linspace(0, 1, 50)
        assert np.array_equal(s(xs), expected(xs))


class TestRepresentation:
    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_merged_matches_two_parts(self, m):
        y = jittered_grid(3 * m + 3, np.random.default_rng(m))
        s = apply_blend(build_blend(y, m), exact_data(y, m, sine))
        merged = s.merged()
        xs = np.linspace(0, 1, 700)
        assert np.max(np.abs(merged(xs) - s(xs))) <= 1e-12
        assert np.array_equal(merged.knots, union_knots(s.quasi_part.knots, s.local_part.knots))

    def test_union_knots(self):
        assert union_knots([0, 0, 1, 2], [0, 1, 1, 3]).tolist() == [0, 0, 1, 1, 2, 3]

    def test_parts_must_agree(self):
        a = SplineFunction([0, 0, 0, 1, 1, 1], 3, [0, 1, 2])
        b = SplineFunction([0, 0, 0, 0, 2, 2, 2, 2], 4, [0, 1, 2, 3])
        with pytest.raises(ValueError):
            BlendedSpline(a, b)

    def test_eval_helpers(self):
        y = np.linspace(0, 1, 10)
        ones = SplineFunction([0, 0, 0, 0.5, 1, 1, 1], 3, np.ones(4))
        assert np.allclose(eval_spline(ones, np.linspace(0, 1, 9)), 1.0, atol=1e-15)
        s = interpolate(y, np.cos(3 * y), m=4)
        assert eval_spline_deriv(s, 0, 0.3) == eval_spline(s, 0.3)
        with pytest.raises(DomainError):
            eval_spline(s, 1.2)

    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_derivative_matches_finite_difference(self, m):
        y = jittered_grid(3 * m + 2, np.random.default_rng(m))
        s = apply_blend(build_blend(y, m), exact_data(y, m, sine))
        h = 1e-5
        for x in np.linspace(0.05, 0.95, 23):
            fd = (s(x + h) - s(x - h)) / (2 * h)
            assert s.derivative(x, 1) == pytest.approx(fd, rel=1e-6, abs=1e-9)
