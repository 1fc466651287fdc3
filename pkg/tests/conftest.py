import pytest

from padicsolve import MobiusPairParams, PadicNumber, make_mobius

DIGITS = 60


def mobius_params(coeffs, prime=5, digits=DIGITS):
    a, b, c, a1, b1, c1 = (PadicNumber.from_int(v, prime, digits)
                           for v in coeffs)
    return MobiusPairParams(a, b, c, a1, b1, c1)


@pytest.fixture(scope="session")
def mobius_ones():
    """All-ones coefficients: the map collapses to the constant 1."""
    return make_mobius(mobius_params((1, 1, 1, 1, 1, 1)))


@pytest.fixture(scope="session")
def mobius_116():
    """Coefficients (1, 1, 1, 1, 1, 6) at p = 5, the workhorse example."""
    return make_mobius(mobius_params((1, 1, 1, 1, 1, 6)))
