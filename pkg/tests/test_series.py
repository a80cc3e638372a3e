from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plusforms.errors import PrecisionError
from plusforms.generators import (r_k_bruteforce, theta_series)
from plusforms.series import (ExactSeries, _schoolbook, series_mul,
                              series_pow)


def test_difference_of_squares():
    a = ExactSeries([1, 1, 0], 3)
    b = ExactSeries([1, -1, 0], 3)
    assert series_mul(a, b, 3).coeffs == [1, 0, -1]


def test_multiplicative_identity():
    a = ExactSeries([3, -7, Fraction(1, 2), 9], 4)
    one = ExactSeries.one(4)
    assert series_mul(a, one, 4) == a


def test_theta_squared_counts_two_square_representations():
    # oracle: brute-force lattice point count
    expected = r_k_bruteforce(2, 5)
    th = theta_series(5)
    assert series_mul(th, th, 5).coeffs == expected
    assert expected == [1, 4, 4, 0, 4]


def test_theta_fourth_counts_four_square_representations():
    expected = r_k_bruteforce(4, 4)
    th = theta_series(4)
    assert series_pow(th, 4, 4).coeffs == expected
    assert expected == [1, 8, 24, 32]


def test_pow_zero_and_one():
    a = ExactSeries([5, 6, 7], 3)
    assert series_pow(a, 0, 3) == ExactSeries.one(3)
    assert series_pow(a, 1, 3) == a


def test_precision_shortfall_names_requirement():
    a = ExactSeries([1, 2], 2)
    b = ExactSeries([1], 1)
    with pytest.raises(PrecisionError, match=">= 2"):
        series_mul(a, b, 2)


def test_kronecker_matches_schoolbook_on_signed_input():
    # dual route: the packed big-integer path against direct convolution
    import random
    rng = random.Random(7)
    n = 200  # above the schoolbook threshold
    a = [rng.randint(-10**6, 10**6) for _ in range(n)]
    b = [rng.randint(-10**6, 10**6) for _ in range(n)]
    sa, sb = ExactSeries(a, n), ExactSeries(b, n)
    assert series_mul(sa, sb, n).coeffs == _schoolbook(a, b, n)


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=24),
       st.lists(st.integers(-50, 50), min_size=1, max_size=24),
       st.lists(st.integers(-50, 50), min_size=1, max_size=24))
@settings(max_examples=60, deadline=None)
def test_mul_commutative_associative(xs, ys, zs):
    n = min(len(xs), len(ys), len(zs))
    a, b, c = (ExactSeries(v[:n], n) for v in (xs, ys, zs))
    ab = series_mul(a, b, n)
    ba = series_mul(b, a, n)
    assert ab == ba
    assert series_mul(ab, c, n) == series_mul(a, series_mul(b, c, n), n)


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=16),
       st.integers(2, 5))
@settings(max_examples=40, deadline=None)
def test_pow_equals_iterated_mul(xs, e):
    n = len(xs)
    a = ExactSeries(xs, n)
    expected = a.truncate(n)
    for _ in range(e - 1):
        expected = series_mul(expected, a, n)
    assert series_pow(a, e, n) == expected


def test_rational_coefficients_stay_exact():
    a = ExactSeries([Fraction(1, 3), Fraction(2, 7)], 2)
    b = ExactSeries([Fraction(3, 5), Fraction(1, 2)], 2)
    prod = series_mul(a, b, 2)
    assert prod.coeffs[0] == Fraction(1, 5)
    assert prod.coeffs[1] == Fraction(1, 6) + Fraction(6, 35)
