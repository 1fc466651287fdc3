"""The four contractive map families: closure, contraction, spot values."""

import random

import pytest
from conftest import mobius_params

from padicsolve import (AlgebraElement, DomainError, DomainSpec,
                        LinearFractionalParams, PadicNumber,
                        RationalPolyParams, km2009_params,
                        make_linear_fractional, make_mobius,
                        make_rational_poly, make_seq_map, sample_element,
                        shift, shifted_product_map, triple_product_spec,
                        verify_contraction)


def n5(v, digits=60):
    return PadicNumber.from_int(v, 5, digits)


def ep_scalar(v, digits=60):
    return AlgebraElement.scalar(n5(v, digits))


# -- mobius -------------------------------------------------------------

def test_mobius_all_ones_is_constant(mobius_ones):
    rng = random.Random(0)
    for _ in range(20):
        x = sample_element(DomainSpec.ep(), 5, 60, rng)
        y = sample_element(DomainSpec.ep(), 5, 60, rng)
        assert mobius_ones(x, y) == ep_scalar(1)


def test_mobius_spot_value(mobius_116):
    out = mobius_116(ep_scalar(1), ep_scalar(1))
    assert out.scalar_value == PadicNumber.from_rational(4, 9, 5, 60)
    assert out.scalar_value.valuation == 0
    assert out.scalar_value.residue(1) == 1  # lands back in E_p


def test_mobius_closure_on_samples(mobius_116):
    rng = random.Random(4)
    ep = DomainSpec.ep()
    for _ in range(200):
        x = sample_element(ep, 5, 60, rng)
        y = sample_element(ep, 5, 60, rng)
        assert ep.contains(mobius_116(x, y))


def test_mobius_rejects_bad_parameters():
    with pytest.raises(DomainError):
        mobius_params((1, 1, 1, 1, 1, 5))  # |5| = 1/5, not in E_p
    with pytest.raises(DomainError):
        mobius_params((1, 1, 1, 1, 1, 2))  # 2 != 1 mod 5
    with pytest.raises(DomainError):
        mobius_params((1, 1, 1, 1, 1, 1), prime=2)


# -- rational polynomial quotient ----------------------------------------

def ratpoly_params(numer, denom, c=1, c1=2, arity=2, degree=2, digits=60):
    wrap = lambda v: PadicNumber.from_int(v, 5, digits)
    return RationalPolyParams(
        arity, degree,
        {idx: wrap(v) for idx, v in numer.items()},
        {idx: wrap(v) for idx, v in denom.items()},
        wrap(c), wrap(c1))


def test_ratpoly_empty_sums_give_constant():
    f = make_rational_poly(ratpoly_params({}, {}, c=3, c1=4))
    x = ep_scalar(2)
    expected = PadicNumber.from_rational(3, 4, 5, 60)
    assert f(x, x).scalar_value == expected


def test_ratpoly_degenerate_identity_value():
    params = ratpoly_params({(1,): 5}, {(1,): 5}, c=1, c1=1, arity=1, degree=1)
    f = make_rational_poly(params)
    for v in (1, 2, 3, 7):
        assert f(ep_scalar(v)).scalar_value == n5(1)


def test_ratpoly_contracts_on_sphere():
    params = ratpoly_params({(1, 0): 5, (0, 1): 10, (1, 1): 15},
                            {(1, 0): 20, (0, 2): 5})
    f = make_rational_poly(params)
    report = verify_contraction(f, samples=300, seed=5)
    assert report.passed
    assert report.min_observed_gap >= 1


def test_ratpoly_rejects_unit_coefficient():
    with pytest.raises(DomainError):
        ratpoly_params({(1, 0): 2}, {})  # |2| = 1 is not < 1
    with pytest.raises(DomainError):
        ratpoly_params({}, {}, c=5)  # |5| != 1


# -- linear fractional vector map -----------------------------------------

def linfrac_params(m=2, prime=5, digits=60, fill=1, rng=None):
    def entry():
        if rng is None:
            return PadicNumber.from_int(fill, prime, digits)
        return PadicNumber(prime, 0, 1 + prime * rng.randrange(prime**8),
                           digits)

    mat = lambda: tuple(tuple(entry() for _ in range(m)) for _ in range(m))
    vec = lambda: tuple(entry() for _ in range(m))
    return LinearFractionalParams(m, mat(), vec(), mat(), vec())


def test_linfrac_all_ones_collapses_to_one():
    f = make_linear_fractional(linfrac_params(m=1))
    out = f(AlgebraElement.vector([n5(6)]))
    assert out.components[0] == n5(1)
    f2 = make_linear_fractional(linfrac_params(m=2))
    out2 = f2(AlgebraElement.vector([n5(6), n5(11)]))
    assert all(c == n5(1) for c in out2.components)


def test_linfrac_divisibility_hypothesis():
    with pytest.raises(DomainError):
        linfrac_params(m=2, prime=3)  # 3 divides m + 1


def test_linfrac_contracts_in_sup_norm():
    f = make_linear_fractional(linfrac_params(m=2, rng=random.Random(9)))
    report = verify_contraction(f, samples=300, seed=6)
    assert report.passed
    assert report.min_observed_gap >= 1


# -- sequence map ----------------------------------------------------------

def test_km_preset_exponent_and_contraction():
    params = km2009_params(n5(6), truncation=8)
    assert params.a == n5(25)
    assert params.b == n5(5)
    assert params.contraction_exponent == 1
    f = make_seq_map(params)
    report = verify_contraction(f, samples=200, seed=7)
    assert report.passed
    assert report.min_observed_gap >= 1


def test_km_preset_theta_one_is_constant_weights():
    params = km2009_params(n5(1), truncation=4)
    f = make_seq_map(params)
    rng = random.Random(1)
    x = sample_element(f.domain, 5, 60, rng)
    assert f(x) == params.weights


def test_seq_map_zero_weights_gives_zero_map():
    zero = PadicNumber.zero(5, 60)
    weights = AlgebraElement.seq((zero,) * 4)
    params = km2009_params(n5(6), truncation=4, weights=weights)
    f = make_seq_map(params)
    rng = random.Random(2)
    out = f(sample_element(f.domain, 5, 60, rng))
    assert all(c.is_zero for c in out.components)


def test_seq_map_parameter_validation():
    with pytest.raises(DomainError):
        km2009_params(n5(2), truncation=4)  # theta outside E_p
    heavy = AlgebraElement.seq((PadicNumber.from_rational(1, 5, 5, 60),) * 4)
    with pytest.raises(DomainError):
        km2009_params(n5(6), truncation=4, weights=heavy)


def test_inner_family_values():
    params = km2009_params(n5(6), truncation=3)
    x = AlgebraElement.seq((n5(1), n5(2), n5(3)))
    g = params.inner(0, x)
    assert g == n5(1 + 5 * 6)
    assert g.valuation == 0


# -- shifted products --------------------------------------------------------

def test_shifted_product_constant_base():
    params = km2009_params(n5(1), truncation=4, shift_count=1)
    f = shifted_product_map(params)
    rng = random.Random(3)
    x = sample_element(f.domain, 5, 60, rng)
    assert f(x) == shift(params.weights)


def test_shifted_product_zero_weights():
    zero = PadicNumber.zero(5, 60)
    weights = AlgebraElement.seq((zero,) * 4)
    params = km2009_params(n5(6), truncation=4, weights=weights, shift_count=2)
    f = shifted_product_map(params)
    rng = random.Random(4)
    out = f(sample_element(f.domain, 5, 60, rng))
    assert all(c.is_zero for c in out.components)


def test_shifted_product_contracts():
    params = km2009_params(n5(6), truncation=8, shift_count=2)
    f = shifted_product_map(params)
    report = verify_contraction(f, samples=200, seed=8)
    assert report.passed
    assert report.min_observed_gap >= 1


def test_shifted_product_matches_manual_composition():
    params = km2009_params(n5(6), truncation=5, shift_count=2)
    base = make_seq_map(params)
    f = shifted_product_map(params)
    rng = random.Random(5)
    x = sample_element(f.domain, 5, 60, rng)
    image = base(x)
    assert f(x) == shift(image) * shift(shift(image))


# -- staggered triple products ------------------------------------------------

def test_triple_product_spec_shape(mobius_116):
    spec = triple_product_spec(mobius_116)
    assert spec.window_length == 4
    assert spec.offsets == ((0, 1, 2),)
    assert spec.summands == 1
    assert spec.factors == 3
