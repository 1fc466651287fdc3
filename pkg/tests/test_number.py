"""Core p-adic arithmetic: representation, precision tracking, ultrametric."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padicsolve import DomainError, PadicNumber, PrecisionError, ord_p

primes = st.sampled_from((2, 3, 5, 7))
small_ints = st.integers(min_value=-10**6, max_value=10**6)
nonzero_ints = small_ints.filter(lambda n: n != 0)


def test_from_rational_identity():
    x = PadicNumber.from_rational(1, 1, 5, 4)
    assert x.valuation == 0
    assert x.unit == 1
    assert x.digits == 4


def test_from_rational_strips_prime_powers():
    x = PadicNumber.from_rational(75, 2, 5, 4)
    assert x.valuation == 2
    assert x.norm() == Fraction(1, 25)
    # 75/2 = 5^2 * 3/2 and 3/2 = 314 mod 625
    assert x.unit == 3 * pow(2, -1, 625) % 625


def test_from_rational_six_is_in_E5():
    x = PadicNumber.from_rational(6, 1, 5, 2)
    assert x.valuation == 0
    assert x.unit == 6
    assert (x - 1).valuation == 1  # |6 - 1| = 1/5


def test_from_rational_zero_denominator():
    with pytest.raises(DomainError):
        PadicNumber.from_rational(1, 0, 5, 4)


def test_from_rational_zero_numerator_is_exact_zero():
    x = PadicNumber.from_rational(0, 7, 5, 4)
    assert x.is_exact_zero
    assert x.norm() == 0


def test_add_of_negation_vanishes():
    x = PadicNumber.from_rational(42, 11, 5, 8)
    z = x + (-x)
    assert z.is_zero
    assert z.is_exact_zero
    assert z.norm() == 0
    assert (x - x).is_exact_zero


def test_cancellation_between_different_precisions_keeps_floor():
    # equal residue classes tracked to different depths: only the common
    # precision floor is certified, not exact equality
    x = PadicNumber.from_int(1, 5, 4)
    y = PadicNumber.from_int(1, 5, 6)
    z = x - y
    assert z.is_zero
    assert not z.is_exact_zero
    assert z.valuation_floor == 4


def test_mul_inverse_pair_gives_one():
    a = PadicNumber.from_rational(5, 1, 5, 4)
    b = PadicNumber.from_rational(1, 5, 5, 4)
    assert a * b == PadicNumber.one(5, 4)


def test_ultrametric_equality_case():
    a = PadicNumber.from_int(5, 5, 6)       # valuation 1
    b = PadicNumber.from_int(375, 5, 6)     # valuation 3
    assert (a + b).valuation == 1
    assert (a + b).norm() == Fraction(1, 5)


def test_precision_rule_for_add():
    # abs precisions 4 and 6; the sum is known mod 5^4
    x = PadicNumber.from_int(1, 5, 4)
    y = PadicNumber.from_int(75, 5, 4)
    s = x + y
    assert s.valuation == 0
    assert s.digits == 4


def test_cancellation_shrinks_digits():
    x = PadicNumber.from_int(26, 5, 4)
    y = PadicNumber.from_int(1, 5, 4)
    d = x - y
    assert d.valuation == 2
    assert d.digits == 2


def test_division_by_zero_kinds():
    one = PadicNumber.one(5, 4)
    with pytest.raises(DomainError):
        one / PadicNumber.zero(5, 4)
    with pytest.raises(PrecisionError):
        one / PadicNumber.zero(5, 4, floor=3)


def test_pow_and_inverse():
    x = PadicNumber.from_rational(7, 3, 5, 10)
    assert x**3 == x * x * x
    assert x**0 == PadicNumber.one(5, 10)
    assert x**-2 == (x.inverse()) ** 2
    assert x * x.inverse() == PadicNumber.one(5, 10)


def test_residue_and_digit_forms():
    x = PadicNumber.from_int(6, 5, 3)
    assert x.residue(2) == 6
    assert x.unit_digits() == [1, 1, 0]
    assert x.text() == "5^0 * 6 (mod 5^3)"
    z = PadicNumber.zero(5, 3, floor=7)
    assert z.text() == "0 (mod 5^7)"
    with pytest.raises(PrecisionError):
        z.residue(8)


def test_int_coercion():
    x = PadicNumber.from_int(2, 7, 5)
    assert x + 5 == PadicNumber.from_int(7, 7, 5)
    assert (3 * x) == PadicNumber.from_int(6, 7, 5)
    assert (1 - x) == PadicNumber.from_int(-1, 7, 5)


@given(primes, nonzero_ints, nonzero_ints)
def test_multiplicativity_of_valuation(p, a, b):
    x = PadicNumber.from_int(a, p, 30)
    y = PadicNumber.from_int(b, p, 30)
    assert (x * y).valuation == x.valuation + y.valuation


@given(primes, nonzero_ints, nonzero_ints)
def test_strong_triangle_inequality(p, a, b):
    x = PadicNumber.from_int(a, p, 30)
    y = PadicNumber.from_int(b, p, 30)
    s = x + y
    low = min(x.valuation, y.valuation)
    assert s.valuation_floor >= low
    if x.valuation != y.valuation:
        assert s.valuation == low


@given(primes, nonzero_ints, st.integers(min_value=1, max_value=10**6))
def test_round_trip_through_denominator(p, m, n):
    lhs = PadicNumber.from_rational(m, n, p, 25) * PadicNumber.from_int(n, p, 25)
    assert lhs == PadicNumber.from_int(m, p, 25)


@given(primes, st.integers(min_value=1, max_value=10**9),
       st.integers(min_value=2, max_value=50))
@settings(max_examples=200)
def test_newton_inverse_lifting(p, raw, digits):
    unit = raw
    while unit % p == 0:
        unit //= p
    x = PadicNumber(p, 0, unit % p**digits or 1, digits)
    assert (x * x.inverse()).residue(digits) == 1


def test_ord_p():
    assert ord_p(75, 5) == 2
    assert ord_p(-50, 5) == 2
    assert ord_p(7, 5) == 0
    with pytest.raises(ValueError):
        ord_p(0, 5)
