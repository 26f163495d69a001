"""Truncated power series and the diagonal coefficient test."""
import math

import numpy as np
import pytest

from cnp_lab.errors import NotNormalized, ZeroConstantTerm
from cnp_lab.series import (
    PowerSeries,
    binomial_series,
    constant,
    diagonal_cnp_test,
    geometric,
    monomial,
    series_mul,
    series_reciprocal,
)


class TestArithmetic:
    def test_geometric_times_one_minus_t(self):
        prod = geometric(10) * (1.0 - monomial(1, 10))
        np.testing.assert_allclose(prod.as_array(), constant(1.0, 10).as_array())

    def test_mul_truncates_to_smaller_order(self):
        assert series_mul(geometric(5), geometric(3)).order == 3

    def test_scalar_ops(self):
        s = 2.0 * geometric(3) - 1.0
        assert s.coeffs == (1.0, 2.0, 2.0, 2.0)

    def test_horner_evaluation(self):
        assert PowerSeries((1.0, 2.0, 3.0))(0.5) == pytest.approx(1 + 1 + 0.75)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            PowerSeries(())


class TestReciprocal:
    def test_reciprocal_of_geometric(self):
        r = series_reciprocal(geometric(8))
        np.testing.assert_allclose(r.as_array(), [1, -1] + [0] * 7, atol=1e-15)

    def test_round_trip(self):
        rng = np.random.default_rng(2)
        a = PowerSeries(np.r_[1.0, rng.normal(size=20)])
        back = series_reciprocal(series_reciprocal(a))
        np.testing.assert_allclose(back.as_array(), a.as_array(), atol=1e-12, rtol=0)

    def test_zero_constant(self):
        with pytest.raises(ZeroConstantTerm):
            series_reciprocal(monomial(1, 4))

    def test_bergman_reciprocal_is_polynomial(self):
        # (1 - t)^2 is the reciprocal of 1/(1 - t)^2
        r = series_reciprocal(binomial_series(-2.0, 6))
        np.testing.assert_allclose(r.as_array(), [1, -2, 1, 0, 0, 0, 0], atol=1e-13)


class TestBinomial:
    def test_matches_math_comb(self):
        s = binomial_series(5.0, 7)
        expect = [(-1) ** n * math.comb(5, n) for n in range(8)]
        np.testing.assert_allclose(s.as_array(), expect)

    def test_negative_exponent(self):
        s = binomial_series(-2.0, 5)
        np.testing.assert_allclose(s.as_array(), np.arange(1, 7))

    def test_fractional(self):
        s = binomial_series(0.5, 3)
        np.testing.assert_allclose(s.as_array(), [1, -0.5, -0.125, -0.0625])


class TestDiagonalTest:
    def test_szego_is_cnp(self):
        v = diagonal_cnp_test(geometric(32))
        assert v.is_cnp and v.index is None and v.verdict == "Cnp"

    def test_bergman_fails_at_two(self):
        v = diagonal_cnp_test(binomial_series(-2.0, 32))
        assert (v.index, v.value) == (2, -1.0)

    def test_weighted_bergman_index_two_value(self):
        for p in (3.0, 3.5, 4.0):
            v = diagonal_cnp_test(binomial_series(-p, 32))
            assert v.index == 2
            assert v.value == pytest.approx(-p * (p - 1) / 2, abs=1e-12)

    def test_not_normalized(self):
        with pytest.raises(NotNormalized):
            diagonal_cnp_test(2.0 * geometric(4))
