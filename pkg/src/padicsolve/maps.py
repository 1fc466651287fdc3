"""Ready-made contractive map families on concrete p-adic domains.

Four constructors, each pairing a rational-map formula with the domain
on which it provably contracts:

* ``make_mobius``            - two-variable quotient of symmetric bilinear
  forms with unit-circle-like coefficients, contracting on E_p^2;
* ``make_rational_poly``     - quotient of constant-free polynomials with
  small coefficients, contracting on the unit sphere;
* ``make_linear_fractional`` - componentwise ratios of affine forms,
  contracting on E_p^m vectors;
* ``make_seq_map``           - weighted componentwise fractional update of
  truncated null sequences, contracting on the unit ball.

Every constructor re-derives its closure and contraction claims on a
seeded sample before returning the map.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Mapping

from .algebra import SEQ, VECTOR, AlgebraElement, DomainSpec, shift
from .contraction import ContractiveMap, verify_contraction
from .number import CertificateError, DomainError, PadicNumber
from .recurrence import OFFSETS_RELAXED, RecurrenceSpec
from .sampling import sample_element
from .series import in_Ep

MultiIndex = tuple[int, ...]


def _certify(f: ContractiveMap, samples: int, seed: int) -> ContractiveMap:
    report = verify_contraction(f, samples=samples, seed=seed)
    if not report.passed:
        raise CertificateError(
            f"{f.label}: sampled verification failed "
            f"(min gap {report.min_observed_gap}, range ok {report.range_ok})")
    return f


def _require_ep(value: PadicNumber, name: str) -> None:
    if not in_Ep(value):
        raise DomainError(f"parameter {name} must lie in E_p")


# -- two-variable quotient map on E_p ----------------------------------

@dataclass(frozen=True, slots=True)
class MobiusPairParams:
    """Six E_p coefficients (a, b, c) over (a1, b1, c1), prime >= 3."""

    a: PadicNumber
    b: PadicNumber
    c: PadicNumber
    a1: PadicNumber
    b1: PadicNumber
    c1: PadicNumber

    def __post_init__(self) -> None:
        ref = self.a
        if ref.prime < 3:
            raise DomainError("this family requires an odd prime")
        for name in ("a", "b", "c", "a1", "b1", "c1"):
            value = getattr(self, name)
            if value.prime != ref.prime:
                raise ValueError("parameters must share one prime")
            _require_ep(value, name)

    @property
    def prime(self) -> int:
        return self.a.prime

    @property
    def digits(self) -> int:
        return min(getattr(self, n).digits
                   for n in ("a", "b", "c", "a1", "b1", "c1"))


def make_mobius(params: MobiusPairParams, samples: int = 32,
                seed: int = 0) -> ContractiveMap:
    """(a*x*y + b*(x+y) + c) / (a1*x*y + b1*(x+y) + c1) on E_p x E_p."""
    a, b, c = params.a, params.b, params.c
    a1, b1, c1 = params.a1, params.b1, params.c1

    def evaluate(xe: AlgebraElement, ye: AlgebraElement) -> AlgebraElement:
        x, y = xe.scalar_value, ye.scalar_value
        xy = x * y
        s = x + y
        return AlgebraElement.scalar((a * xy + b * s + c) / (a1 * xy + b1 * s + c1))

    f = ContractiveMap(2, DomainSpec.ep(), 1, evaluate,
                       prime=params.prime, digits=params.digits, label="mobius")
    return _certify(f, samples, seed)


# -- polynomial quotient map on the unit sphere ------------------------

@dataclass(frozen=True, slots=True)
class RationalPolyParams:
    """Constant-free polynomial coefficients with valuation >= 1.

    ``numerator`` and ``denominator`` map multi-indices (one exponent
    per variable, total degree 1..max_degree) to coefficients inside
    the open unit ball; the two added constants are units.
    """

    arity: int
    max_degree: int
    numerator: Mapping[MultiIndex, PadicNumber]
    denominator: Mapping[MultiIndex, PadicNumber]
    constant: PadicNumber
    constant1: PadicNumber

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ValueError("arity must be >= 1")
        if self.max_degree < 1:
            raise ValueError("max_degree must be >= 1")
        p = self.constant.prime
        for name in ("constant", "constant1"):
            value = getattr(self, name)
            if value.is_zero or value.valuation != 0:
                raise DomainError(f"{name} must be a unit (valuation 0)")
            if value.prime != p:
                raise ValueError("coefficients must share one prime")
        for side, coeffs in (("numerator", self.numerator),
                             ("denominator", self.denominator)):
            for idx, coeff in coeffs.items():
                if len(idx) != self.arity or any(e < 0 for e in idx):
                    raise ValueError(f"{side} index {idx} malformed")
                if not 1 <= sum(idx) <= self.max_degree:
                    raise ValueError(
                        f"{side} index {idx} outside degree range 1..{self.max_degree}")
                if coeff.prime != p:
                    raise ValueError("coefficients must share one prime")
                if coeff.valuation_floor < 1:
                    raise DomainError(
                        f"{side} coefficient at {idx} must have valuation >= 1")

    @property
    def prime(self) -> int:
        return self.constant.prime

    @property
    def digits(self) -> int:
        return self.constant.digits


def _poly(coeffs: Mapping[MultiIndex, PadicNumber], xs, prime: int,
          digits: int) -> PadicNumber:
    acc = PadicNumber.zero(prime, digits)
    for idx, coeff in coeffs.items():
        term = coeff
        for x, e in zip(xs, idx):
            if e:
                term = term * x**e
        acc = acc + term
    return acc


def make_rational_poly(params: RationalPolyParams, samples: int = 32,
                       seed: int = 0) -> ContractiveMap:
    """(P(xs) + C) / (Q(xs) + C1) on the unit sphere to the arity power."""
    p, d = params.prime, params.digits

    def evaluate(*elems: AlgebraElement) -> AlgebraElement:
        xs = [e.scalar_value for e in elems]
        num = _poly(params.numerator, xs, p, d) + params.constant
        den = _poly(params.denominator, xs, p, d) + params.constant1
        return AlgebraElement.scalar(num / den)

    f = ContractiveMap(params.arity, DomainSpec.unit_sphere(), 1, evaluate,
                       prime=p, digits=d, label="ratpoly")
    return _certify(f, samples, seed)


# -- componentwise affine-ratio map on E_p^m ---------------------------

@dataclass(frozen=True, slots=True)
class LinearFractionalParams:
    """Matrices and constants in E_p for the vector-valued ratio map.

    ``numer_matrix[k][j]`` multiplies x_j in component k's numerator,
    ``numer_const[k]`` is added; likewise for the denominator.  The
    dimension plus one must not be divisible by the prime (otherwise
    the affine sums could leave the unit circle).
    """

    size: int
    numer_matrix: tuple[tuple[PadicNumber, ...], ...]
    numer_const: tuple[PadicNumber, ...]
    denom_matrix: tuple[tuple[PadicNumber, ...], ...]
    denom_const: tuple[PadicNumber, ...]

    def __post_init__(self) -> None:
        m = self.size
        if m < 1:
            raise ValueError("size must be >= 1")
        p = self.numer_const[0].prime
        if (m + 1) % p == 0:
            raise DomainError(
                f"size + 1 = {m + 1} must not be divisible by the prime {p}")
        for mat in (self.numer_matrix, self.denom_matrix):
            if len(mat) != m or any(len(row) != m for row in mat):
                raise ValueError("matrices must be size x size")
        if len(self.numer_const) != m or len(self.denom_const) != m:
            raise ValueError("constant vectors must have length size")
        entries = [e for mat in (self.numer_matrix, self.denom_matrix)
                   for row in mat for e in row]
        entries += list(self.numer_const) + list(self.denom_const)
        for i, e in enumerate(entries):
            if e.prime != p:
                raise ValueError("entries must share one prime")
            _require_ep(e, f"entry #{i}")

    @property
    def prime(self) -> int:
        return self.numer_const[0].prime

    @property
    def digits(self) -> int:
        return self.numer_const[0].digits


def make_linear_fractional(params: LinearFractionalParams, samples: int = 32,
                           seed: int = 0) -> ContractiveMap:
    """Vector map with components (sum_j A_kj x_j + a_k)/(sum_j B_kj x_j + b_k)."""
    m = params.size

    def evaluate(xe: AlgebraElement) -> AlgebraElement:
        xs = xe.components
        out = []
        for k in range(m):
            num = params.numer_const[k]
            den = params.denom_const[k]
            for j in range(m):
                num = num + params.numer_matrix[k][j] * xs[j]
                den = den + params.denom_matrix[k][j] * xs[j]
            out.append(num / den)
        return AlgebraElement.vector(out)

    f = ContractiveMap(1, DomainSpec.ep((VECTOR, m)), 1, evaluate,
                       prime=params.prime, digits=params.digits, label="linfrac")
    return _certify(f, samples, seed)


# -- weighted fractional update of truncated sequences -----------------

InnerFamily = Callable[[int, AlgebraElement], PadicNumber]


@dataclass(frozen=True, slots=True)
class SeqMapParams:
    """Data for the sequence map (F(x))_k = w_k (a x_k + g_k(x))/(b + g_k(x)).

    ``weights`` is a truncated sequence of sup norm <= 1; ``a`` and ``b``
    need valuation >= 1 (the contraction exponent is the smaller of the
    two).  The inner family ``g_k`` must take unit values on the unit
    ball and be 1-Lipschitz; set ``inner_trusted`` only when that holds
    by construction, otherwise the constructor samples it.
    """

    truncation: int
    weights: AlgebraElement
    a: PadicNumber
    b: PadicNumber
    inner: InnerFamily
    inner_trusted: bool = False
    shift_count: int = 1

    def __post_init__(self) -> None:
        if self.truncation < 1:
            raise ValueError("truncation must be >= 1")
        if self.weights.kind != SEQ or self.weights.truncation != self.truncation:
            raise ValueError("weights must be a sequence of the stated truncation")
        if self.weights.valuation_floor < 0:
            raise DomainError("weights must have sup norm <= 1")
        for name in ("a", "b"):
            value = getattr(self, name)
            if value.prime != self.weights.prime:
                raise ValueError("scalars must share the weights' prime")
            if value.valuation_floor < 1:
                raise DomainError(f"parameter {name} must have valuation >= 1")
        if self.shift_count < 1:
            raise ValueError("shift_count must be >= 1")

    @property
    def prime(self) -> int:
        return self.weights.prime

    @property
    def digits(self) -> int:
        return min(c.digits for c in self.weights.components)

    @property
    def contraction_exponent(self) -> int | float:
        return min(self.a.valuation_floor, self.b.valuation_floor)


def km_inner_family(prime: int, digits: int) -> InnerFamily:
    """The slot-independent inner family g_k(x) = p * sum_j x_j + 1.

    On the unit ball the sum has valuation >= 0, so the value is a unit
    congruent to 1 mod p, and differences contract by a factor p: the
    family is trusted analytically.
    """

    def inner(_k: int, x: AlgebraElement) -> PadicNumber:
        total = PadicNumber.zero(prime, digits)
        for comp in x.components:
            total = total + comp
        return total * prime + 1

    return inner


def km2009_params(theta: PadicNumber, truncation: int,
                  weights: AlgebraElement | None = None,
                  shift_count: int = 1) -> SeqMapParams:
    """Preset pairing the km inner family with a = p*(theta-1), b = theta-1.

    ``theta`` must lie in E_p, which puts a and b inside the required
    ball analytically.
    """
    _require_ep(theta, "theta")
    p = theta.prime
    if weights is None:
        one = PadicNumber.one(p, theta.digits)
        weights = AlgebraElement.seq((one,) * truncation)
    b = theta - 1
    a = b * p
    return SeqMapParams(truncation, weights, a, b,
                        km_inner_family(p, theta.digits),
                        inner_trusted=True, shift_count=shift_count)


def _check_inner_family(params: SeqMapParams, samples: int, seed: int) -> None:
    rng = random.Random(seed)
    domain = DomainSpec.unit_ball((SEQ, params.truncation))
    for _ in range(samples):
        x = sample_element(domain, params.prime, params.digits, rng)
        y = sample_element(domain, params.prime, params.digits, rng)
        gap_in = (x - y).valuation_floor
        for k in range(params.truncation):
            gx, gy = params.inner(k, x), params.inner(k, y)
            if gx.is_zero or gx.valuation != 0:
                raise CertificateError(
                    f"inner family value at slot {k} is not a unit")
            if (gx - gy).valuation_floor < gap_in:
                raise CertificateError(
                    f"inner family violates the Lipschitz bound at slot {k}")


def make_seq_map(params: SeqMapParams, samples: int = 32,
                 seed: int = 0) -> ContractiveMap:
    """Weighted componentwise fractional map on the unit ball of sequences."""
    if not params.inner_trusted:
        _check_inner_family(params, samples, seed)
    a, b = params.a, params.b
    w = params.weights.components

    def evaluate(xe: AlgebraElement) -> AlgebraElement:
        out = []
        for k, xk in enumerate(xe.components):
            g = params.inner(k, xe)
            out.append(w[k] * ((a * xk + g) / (b + g)))
        return AlgebraElement.seq(out)

    domain = DomainSpec.unit_ball((SEQ, params.truncation))
    f = ContractiveMap(1, domain, params.contraction_exponent, evaluate,
                       prime=params.prime, digits=params.digits, label="seqmap")
    return _certify(f, samples, seed)


def shifted_product_map(params: SeqMapParams, samples: int = 32,
                        seed: int = 0) -> ContractiveMap:
    """x -> prod_{j=1..N} shift^j(F(x)) with F the sequence map above.

    A product of unit-ball factors differs between two points by at most
    the worst factor difference, so the contraction exponent carries over
    from F unchanged.
    """
    base = make_seq_map(params, samples=samples, seed=seed)
    n = params.shift_count

    def evaluate(xe: AlgebraElement) -> AlgebraElement:
        image = base(xe)
        current = shift(image)
        acc = current
        for _ in range(1, n):
            current = shift(current)
            acc = acc * current
        return acc

    f = ContractiveMap(1, base.domain, base.contraction_exponent, evaluate,
                       prime=base.prime, digits=base.digits, label="shiftprod")
    return _certify(f, samples, seed)


def triple_product_spec(f: ContractiveMap) -> RecurrenceSpec:
    """Three staggered copies of one factor: windows start at 0, 1 and m.

    The adjacent first pair needs the relaxed offset rule; the window
    length comes out as 2m, so 2m initial values drive the iteration.
    """
    m = f.arity
    if m < 2:
        raise ValueError("triple product needs arity >= 2")
    return RecurrenceSpec(((f, f, f),), ((0, 1, m),),
                          offset_rule=OFFSETS_RELAXED)
