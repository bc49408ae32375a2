"""
Unit tests for truncated power series
"""

import numpy as np
import pytest

from apps.core.exceptions import BadSpecializationError, FieldMismatchError
from apps.kernel.field import PrimeField
from apps.kernel.series import (
    TruncatedSeries,
    series_derivative,
    series_integrate,
    series_inv,
    series_mul,
)

F101 = PrimeField(101)
BIG = PrimeField()


def random_series(rng, field, order, unit=False):
    values = [int(v) for v in rng.integers(0, min(field.p, 2**62), size=order)]
    if unit and values[0] % field.p == 0:
        values[0] = 1
    return TruncatedSeries.from_coefficients(field, values)


class TestSeriesMul:
    """Test series multiplication"""

    def test_difference_of_squares(self):
        """Test (1 + t)(1 - t) = 1 - t^2"""
        a = TruncatedSeries.from_coefficients(F101, [1, 1, 0])
        b = TruncatedSeries.from_coefficients(F101, [1, -1, 0])

        assert series_mul(a, b).coeffs == (1, 0, 100)

    def test_multiplicative_identity(self):
        """Test a * 1 == a"""
        rng = np.random.default_rng(1)
        a = random_series(rng, BIG, 8)

        assert series_mul(a, TruncatedSeries.one(BIG, 8)) == a

    def test_matches_schoolbook_convolution(self):
        """Test product against an integer double loop reduced mod p"""
        rng = np.random.default_rng(2)
        for _ in range(200):
            a = random_series(rng, F101, 6)
            b = random_series(rng, F101, 6)
            expected = [0] * 6
            for i in range(6):
                for j in range(6):
                    if i + j < 6:
                        expected[i + j] += a.coeffs[i] * b.coeffs[j]

            assert series_mul(a, b).coeffs == tuple(c % 101 for c in expected)

    def test_order_mismatch(self):
        """Test mixing orders raises"""
        with pytest.raises(FieldMismatchError):
            series_mul(TruncatedSeries.one(F101, 3), TruncatedSeries.one(F101, 4))

    def test_modulus_mismatch(self):
        """Test mixing moduli raises"""
        with pytest.raises(FieldMismatchError):
            series_mul(TruncatedSeries.one(F101, 3), TruncatedSeries.one(PrimeField(103), 3))

    def test_ring_axioms(self):
        """Test associativity, commutativity and distributivity on random triples"""
        rng = np.random.default_rng(3)
        for order in (1, 2, 5, 9, 16):
            for field in (F101, BIG):
                for _ in range(40):
                    a, b, c = (random_series(rng, field, order) for _ in range(3))

                    assert (a * b) * c == a * (b * c)
                    assert a * b == b * a
                    assert a * (b + c) == a * b + a * c
                    assert (a + b) - b == a


class TestSeriesInv:
    """Test series inversion"""

    def test_geometric_series(self):
        """Test 1/(1 - t) = 1 + t + t^2 + t^3"""
        a = TruncatedSeries.from_coefficients(F101, [1, -1, 0, 0])

        assert series_inv(a).coeffs == (1, 1, 1, 1)

    def test_inverse_of_one(self):
        """Test 1/1 = 1"""
        one = TruncatedSeries.one(F101, 5)

        assert series_inv(one) == one

    def test_round_trip(self):
        """Test a * inv(a) == 1 for random units up to order 64"""
        rng = np.random.default_rng(4)
        for order in (1, 2, 7, 33, 64):
            for _ in range(20):
                a = random_series(rng, BIG, order, unit=True)

                assert series_mul(a, series_inv(a)) == TruncatedSeries.one(BIG, order)

    def test_zero_constant_term(self):
        """Test non-unit series raises the resample signal"""
        with pytest.raises(BadSpecializationError):
            series_inv(TruncatedSeries.from_coefficients(F101, [0, 1, 2]))


class TestSeriesIntegrate:
    """Test term-wise integration"""

    def test_antiderivative(self):
        """Test integrate(1 + t) = t + t^2/2"""
        a = TruncatedSeries.from_coefficients(F101, [1, 1, 0])

        assert series_integrate(a).coeffs == (0, 1, pow(2, -1, 101))

    def test_zero(self):
        """Test integrate(0) = 0"""
        zero = TruncatedSeries.zero(F101, 6)

        assert series_integrate(zero) == zero

    def test_fundamental_theorem_round_trip(self):
        """Test derivative(integrate(a)) gives back a one order lower"""
        rng = np.random.default_rng(5)
        for order in (2, 5, 12, 40):
            for _ in range(25):
                a = random_series(rng, BIG, order)

                restored = series_derivative(series_integrate(a))

                assert restored.coeffs[:-1] == a.coeffs[:-1]
                assert restored.coeffs[-1] == 0
