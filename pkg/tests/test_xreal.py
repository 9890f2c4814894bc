"""Extended-exponent arithmetic: exactness, ordering, and power accuracy."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from jnbench.errors import DomainError
from jnbench.xreal import (ExtReal, ZERO, ONE, TWO, cmp, compose, exp2, fmt,
                           pow_real, sum_compensated, xmax, xmin)

# Narrow dyadics: sums and products stay within the 53-bit significand,
# so the arithmetic below is exact, not merely correctly rounded.
dyadics = st.integers(-(1 << 25), 1 << 25).map(
    lambda n: Fraction(n, 1 << 12))


def as_ext(fr):
    return ExtReal.from_fraction(fr)


@given(dyadics, dyadics)
def test_add_mul_match_fractions(a, b):
    assert (as_ext(a) + as_ext(b)).to_fraction() == a + b
    assert (as_ext(a) * as_ext(b)).to_fraction() == a * b
    assert (as_ext(a) - as_ext(b)).to_fraction() == a - b


@given(dyadics, dyadics)
def test_cmp_matches_fractions(a, b):
    assert cmp(as_ext(a), as_ext(b)) == (a > b) - (a < b)


@given(dyadics)
def test_neg_abs_roundtrip(a):
    x = as_ext(a)
    assert (-x).to_fraction() == -a
    assert abs(x).to_fraction() == abs(a)
    assert xmax(x, -x).to_fraction() == abs(a)
    assert xmin(x, -x).to_fraction() == -abs(a)


def test_huge_exponents_cancel():
    big = exp2(10 ** 6)
    tiny = exp2(-(10 ** 6))
    assert (big * tiny).to_fraction() == 1
    assert cmp(big, tiny) > 0
    with pytest.raises(DomainError):
        big.to_float()


def test_absorbed_addition_keeps_dominant_term():
    # adding something 2^-2000 smaller cannot move the significand
    a = exp2(0)
    b = exp2(-2000)
    assert (a + b).decompose() == a.decompose()
    assert cmp(a + b, a) == 0


def test_from_int_ratio_exact_for_powers_of_two():
    assert ExtReal.from_int_ratio(3, 4).to_fraction() == Fraction(3, 4)
    x = ExtReal.from_int_ratio(1, 3)
    assert abs(x.to_float() - 1 / 3) < 1e-16


def test_compose_and_decompose():
    x = compose(1, 1.25, 100)
    s, m, e = x.decompose()
    assert (s, m, e) == (1, 1.25, 100)
    assert compose(0, 1.0, 0).is_zero()


def test_sum_compensated_matches_exact_sum():
    # accurate to one ulp of the total (the significand is a double)
    terms = [ExtReal.from_int_ratio(1, 1 << k) for k in range(60)]
    total = sum_compensated(terms)
    expect = sum(Fraction(1, 1 << k) for k in range(60))
    assert abs(total.to_fraction() - expect) <= expect / (1 << 52)


def test_sum_compensated_wide_magnitudes():
    terms = [exp2(200), exp2(-200), -exp2(200)]
    total = sum_compensated(terms)
    assert total.to_fraction() == Fraction(1, 1 << 200)


# Reference powers cross-checked against mpmath at 60 digits.
def test_pow_real_frozen_values():
    v = pow_real(ExtReal.from_int(3), Fraction(1, 3))
    assert abs(v.to_float() - 1.4422495703074083823) < 1e-15

    x = ExtReal.from_float(1.5) * exp2(100)
    y = pow_real(x, Fraction(2, 3))
    s, m, e = y.decompose()
    assert s == 1 and e == 67
    assert abs(m - 1.0400419115259520573) < 1e-15

    v = pow_real(ExtReal.from_int(7), Fraction(-1, 2))
    assert abs(v.to_float() - 0.37796447300922722721) < 1e-15


def test_exp2_fraction_exponent():
    v = exp2(Fraction(10, 3))
    s, m, e = v.decompose()
    assert s == 1 and e == 3
    assert abs(m - 1.2599210498948731648) < 1e-15


def test_pow_preserves_exact_powers_of_two():
    v = pow_real(exp2(30), Fraction(1, 2))
    assert v.decompose() == (1, 1.0, 15)
    v = pow_real(exp2(-101), Fraction(3))
    assert v.decompose() == (1, 1.0, -303)


@given(st.integers(1, 1 << 20), st.fractions(min_value=Fraction(1, 8),
                                             max_value=Fraction(4)))
@settings(max_examples=60)
def test_pow_real_against_mpmath(n, r):
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    got = pow_real(ExtReal.from_int(n), r)
    want = mpmath.power(n, mpmath.mpf(r.numerator) / r.denominator)
    assert abs(got.to_float() / float(want) - 1.0) < 1e-13


def test_fmt_readable_and_stable():
    assert fmt(ZERO) == "0"
    assert fmt(ONE) == "1"
    assert fmt(ExtReal.from_float(-0.375)) == "-0.375"
    big = exp2(5000) * ExtReal.from_float(1.5)
    assert fmt(big) == "1.5*2^5000"
    assert fmt(big) == fmt(exp2(5000) * ExtReal.from_float(1.5))


def test_division_by_zero_raises():
    with pytest.raises(DomainError):
        ONE / ZERO


def test_constants():
    assert ZERO.is_zero()
    assert ONE.to_fraction() == 1
    assert TWO.to_fraction() == 2
