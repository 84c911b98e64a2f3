"""Exact and log-scale binomial/rising-factorial helpers."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pa_lab.binomial import NEG_INF, gbinom, log_comb, log_gbinom, log_rising, rising


def test_rising_matches_direct_product():
    for x in (Fraction(1, 2), Fraction(3, 2), 4, Fraction(7, 3)):
        for n in range(6):
            expected = math.prod((Fraction(x) + i for i in range(n)), start=Fraction(1))
            assert rising(x, n) == expected


def test_rising_empty_product_is_one():
    assert rising(Fraction(9, 2), 0) == 1
    assert rising(0, 0) == 1


def test_gbinom_integer_cases_match_math_comb():
    for a in range(0, 12):
        for b in range(0, 12):
            assert gbinom(a, b) == math.comb(a, b) if b <= a else True
    assert gbinom(10, 3) == 120
    assert gbinom(5, 7) == 0


def test_gbinom_negative_lower_index_is_zero():
    assert gbinom(5, -1) == 0
    assert gbinom(Fraction(7, 2), -2) == 0


def test_gbinom_negative_upper_integer():
    # C(-n, k) = (-1)^k C(n+k-1, k)
    assert gbinom(-3, 2) == 6
    assert gbinom(-3, 3) == -10


def test_gbinom_half_integer_matches_gamma():
    # C(x, y) = Gamma(x+1) / (Gamma(y+1) Gamma(x-y+1)) for positive arguments
    for x, y in ((Fraction(5, 2), Fraction(1, 2)), (Fraction(9, 2), Fraction(5, 2))):
        got = float(gbinom(x, y))
        expected = math.exp(
            math.lgamma(float(x) + 1)
            - math.lgamma(float(y) + 1)
            - math.lgamma(float(x - y) + 1)
        )
        assert got == pytest.approx(expected, rel=1e-12)


def test_gbinom_rejects_non_integer_difference():
    with pytest.raises(ValueError):
        gbinom(Fraction(5, 2), Fraction(1, 3))


@settings(max_examples=200)
@given(
    num=st.integers(min_value=1, max_value=40),
    den=st.sampled_from([1, 2]),
    y=st.integers(min_value=1, max_value=12),
)
def test_gbinom_pascal_identity(num, den, y):
    x = Fraction(num, den)
    assert gbinom(x, y) == gbinom(x - 1, y - 1) + gbinom(x - 1, y)


@settings(max_examples=100)
@given(
    num=st.integers(min_value=1, max_value=30),
    den=st.sampled_from([1, 2, 3]),
    m=st.integers(min_value=0, max_value=8),
    n=st.integers(min_value=0, max_value=8),
)
def test_rising_splits_multiplicatively(num, den, m, n):
    x = Fraction(num, den)
    assert rising(x, m + n) == rising(x, m) * rising(x + m, n)


def test_log_comb_matches_math_comb():
    for a in (0, 1, 5, 40, 300):
        for b in range(0, a + 1):
            assert log_comb(a, b) == pytest.approx(
                math.log(math.comb(a, b)), abs=1e-10
            )
    assert log_comb(5, 9) == NEG_INF
    assert log_comb(5, -1) == NEG_INF


def test_log_comb_rejects_negative_upper():
    with pytest.raises(ValueError):
        log_comb(-2, 1)


def test_log_rising_matches_lgamma():
    for x in (0.5, 1.0, 2.5, 7.0):
        for n in (0, 1, 4, 20):
            expected = math.lgamma(x + n) - math.lgamma(x)
            assert log_rising(x, n) == pytest.approx(expected, abs=1e-10)


def test_log_gbinom_matches_exact_on_overlap():
    cases = [
        (Fraction(9, 2), Fraction(5, 2)),
        (Fraction(15, 2), 3),
        (20, 8),
        (Fraction(61, 2), Fraction(1, 2)),
    ]
    for x, y in cases:
        exact = gbinom(x, y)
        assert exact > 0
        assert log_gbinom(float(x), float(y)) == pytest.approx(
            math.log(float(exact)), abs=1e-9
        )
    assert log_gbinom(5.0, 7.0) == NEG_INF
