"""Exponential and logarithm series: frozen oracles and norm identities.

The spot values are fixed by partial-sum arithmetic over the rationals:
exp(5) at p=5 sums 1 + 5 + 25/2 + ... where every term from the third on
has valuation >= 2, so exp(5) = 6 mod 25; log(6) sums 5 - 25/2 + ... so
log(6) = 5 mod 25.  The tests recompute these partial sums with Fraction
arithmetic before comparing.
"""

import random
from fractions import Fraction

import pytest

from padicsolve import (DomainError, PadicNumber, SeriesBudget, in_Ep, ord_p,
                        padic_exp, padic_log)


def rational_mod(q: Fraction, p: int, exponent: int) -> int:
    mod = p**exponent
    return q.numerator * pow(q.denominator, -1, mod) % mod


def exp_partial_sum_mod(x: int, p: int, exponent: int, terms: int) -> int:
    total = Fraction(0)
    fact = 1
    for n in range(terms):
        fact = fact * n if n else 1
        total += Fraction(x**n, fact)
    return rational_mod(total, p, exponent)


def log_partial_sum_mod(x: int, p: int, exponent: int, terms: int) -> int:
    t = x - 1
    total = Fraction(0)
    for n in range(1, terms):
        total += Fraction((-1) ** (n + 1) * t**n, n)
    return rational_mod(total, p, exponent)


def test_exp_of_zero_is_one():
    z = PadicNumber.zero(5, 10)
    assert padic_exp(z) == PadicNumber.one(5, 10)


def test_exp_spot_value():
    # oracle: partial sum with enough terms that the tail is 0 mod 25
    assert exp_partial_sum_mod(5, 5, 2, 8) == 6
    x = PadicNumber.from_int(5, 5, 10)
    assert padic_exp(x).residue(2) == 6


def test_log_of_one_is_zero():
    assert padic_log(PadicNumber.one(5, 10)).is_zero


def test_log_spot_value():
    assert log_partial_sum_mod(6, 5, 2, 12) == 5
    x = PadicNumber.from_int(6, 5, 10)
    assert padic_log(x).residue(2) == 5


def test_exp_log_deeper_agreement_with_partial_sums():
    for p in (3, 5, 7):
        x = PadicNumber.from_int(p, p, 12)
        assert padic_exp(x).residue(5) == exp_partial_sum_mod(p, p, 5, 40)
        y = PadicNumber.from_int(1 + p, p, 12)
        assert padic_log(y).residue(5) == log_partial_sum_mod(1 + p, p, 5, 40)


def test_domain_errors():
    with pytest.raises(DomainError):
        padic_exp(PadicNumber.one(5, 10))  # |x| = 1 is outside the ball
    with pytest.raises(DomainError):
        padic_log(PadicNumber.from_int(2, 5, 10))  # |x-1| = 1
    with pytest.raises(DomainError):
        padic_exp(PadicNumber.from_int(4, 2, 10))  # p = 2 unsupported


def test_norm_identities_on_random_arguments():
    rng = random.Random(11)
    for p in (3, 5):
        for _ in range(100):
            v = rng.randrange(1, 4)
            unit = rng.randrange(1, p**8)
            while unit % p == 0:
                unit = rng.randrange(1, p**8)
            x = PadicNumber(p, v, unit, 20)
            e = padic_exp(x)
            assert e.valuation == 0
            assert (e - 1).valuation == v
            y = 1 + x
            assert padic_log(y).valuation == x.valuation


def test_round_trips():
    rng = random.Random(23)
    for p in (3, 5):
        for _ in range(30):
            v = rng.randrange(1, 3)
            unit = 1 + p * rng.randrange(p**6)
            x = PadicNumber(p, v, unit, 24)
            defect = padic_log(padic_exp(x)) - x
            assert defect.valuation_floor >= 24 - 2
            y = PadicNumber(p, 0, unit, 24)  # element of 1 + pZ_p when unit = 1 mod p
            back = padic_exp(padic_log(y)) - y
            assert back.valuation_floor >= 24 - 2


def test_in_Ep_examples():
    assert in_Ep(PadicNumber.one(5, 8))
    assert in_Ep(PadicNumber.from_int(6, 5, 8))
    assert not in_Ep(PadicNumber.from_int(5, 5, 8))
    assert not in_Ep(PadicNumber.from_int(2, 5, 8))
    assert not in_Ep(PadicNumber.zero(5, 8))


def test_Ep_closed_under_multiplication():
    rng = random.Random(5)
    p = 5
    for _ in range(300):
        x = PadicNumber(p, 0, 1 + p * rng.randrange(p**8), 12)
        y = PadicNumber(p, 0, 1 + p * rng.randrange(p**8), 12)
        assert in_Ep(x * y)


def test_exp_image_lands_in_Ep():
    rng = random.Random(9)
    for _ in range(50):
        x = PadicNumber(5, rng.randrange(1, 3), 1 + rng.randrange(4), 16)
        assert in_Ep(padic_exp(x))


def test_budget_controls():
    x = PadicNumber.from_int(5, 5, 10)
    tight = SeriesBudget(max_terms=2)
    with pytest.raises(Exception):
        padic_exp(x, tight)
    partial = padic_exp(x, SeriesBudget(target_digits=2))
    assert partial.residue(2) == 6


def test_log_budget_short_circuit():
    x = PadicNumber.from_int(6, 5, 10)
    out = padic_log(x, SeriesBudget(target_digits=1))
    assert out.valuation_floor >= 1


def test_factorial_valuation_bookkeeping():
    # exp terms x^n/n! keep valuation >= n*v - (n - digitsum)/(p-1) > 0
    x = PadicNumber.from_int(3, 3, 30)
    e = padic_exp(x)
    assert e.valuation == 0
    assert (e - 1).valuation == 1
    assert ord_p(6, 3) == 1
