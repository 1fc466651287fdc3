"""Sup-normed algebra elements and exactly decidable domain predicates.

Three concrete non-Archimedean Banach algebras over Q_p are supported:
scalars, fixed-length vectors with the max norm, and truncated null
sequences (entries beyond the truncation length are zero by convention).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .number import INF, DomainError, PadicNumber

SCALAR = "scalar"
VECTOR = "vector"
SEQ = "seq"

_KINDS = (SCALAR, VECTOR, SEQ)


@dataclass(frozen=True, slots=True, eq=False)
class AlgebraElement:
    """Tagged value: a scalar, a vector, or a truncated sequence.

    Components share one prime; the norm is the max of component norms.
    """

    kind: str
    components: tuple[PadicNumber, ...]

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if not self.components:
            raise ValueError("at least one component required")
        if self.kind == SCALAR and len(self.components) != 1:
            raise ValueError("scalar carries exactly one component")
        p = self.components[0].prime
        if any(c.prime != p for c in self.components):
            raise ValueError("components must share one prime")

    @classmethod
    def scalar(cls, value: PadicNumber) -> "AlgebraElement":
        return cls(SCALAR, (value,))

    @classmethod
    def vector(cls, values: Iterable[PadicNumber]) -> "AlgebraElement":
        return cls(VECTOR, tuple(values))

    @classmethod
    def seq(cls, values: Iterable[PadicNumber]) -> "AlgebraElement":
        return cls(SEQ, tuple(values))

    @property
    def prime(self) -> int:
        return self.components[0].prime

    @property
    def scalar_value(self) -> PadicNumber:
        if self.kind != SCALAR:
            raise ValueError(f"{self.kind} element has no scalar value")
        return self.components[0]

    @property
    def truncation(self) -> int:
        return len(self.components)

    @property
    def valuation_floor(self) -> int | float:
        """Certified lower bound for min component valuation (norm exponent)."""
        return min(c.valuation_floor for c in self.components)

    def norm(self) -> Fraction:
        v = self.valuation_floor
        if v == INF:
            return Fraction(0)
        if v >= 0:
            return Fraction(1, self.prime ** int(v))
        return Fraction(self.prime ** int(-v))

    def _zip(self, other: "AlgebraElement", op) -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        if self.kind != other.kind or len(self.components) != len(other.components):
            raise ValueError("mismatched element shapes")
        return AlgebraElement(
            self.kind, tuple(op(a, b) for a, b in zip(self.components, other.components)))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._zip(other, lambda a, b: a * b)

    def __neg__(self):
        return AlgebraElement(self.kind, tuple(-c for c in self.components))

    def __pow__(self, n: int):
        return AlgebraElement(self.kind, tuple(c**n for c in self.components))

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (self.kind == other.kind
                and len(self.components) == len(other.components)
                and all(a == b for a, b in zip(self.components, other.components)))

    def __repr__(self) -> str:
        body = ", ".join(c.text() for c in self.components)
        return f"<{self.kind} [{body}]>"


def as_element(x: "PadicNumber | AlgebraElement") -> AlgebraElement:
    if isinstance(x, AlgebraElement):
        return x
    return AlgebraElement.scalar(x)


def norm(x: "PadicNumber | AlgebraElement") -> Fraction:
    """Exact sup norm, a power of the prime or 0; never a float."""
    return as_element(x).norm()


def valuation_floor(x: "PadicNumber | AlgebraElement") -> int | float:
    return as_element(x).valuation_floor


# -- domains ----------------------------------------------------------

UNIT_BALL = "unit_ball"
UNIT_SPHERE = "unit_sphere"
EP = "ep"
PRODUCT = "product"

SHAPE_SCALAR = (SCALAR,)


@dataclass(frozen=True, slots=True)
class DomainSpec:
    """Membership predicate decidable exactly from valuations.

    ``shape`` pins the expected element layout: ``("scalar",)``,
    ``("vector", m)`` or ``("seq", T)``.  ``product`` applies one scalar
    predicate per component of a vector or sequence.
    """

    kind: str
    shape: tuple = SHAPE_SCALAR
    factors: tuple["DomainSpec", ...] = ()

    @classmethod
    def unit_ball(cls, shape: tuple = SHAPE_SCALAR) -> "DomainSpec":
        return cls(UNIT_BALL, shape)

    @classmethod
    def unit_sphere(cls, shape: tuple = SHAPE_SCALAR) -> "DomainSpec":
        return cls(UNIT_SPHERE, shape)

    @classmethod
    def ep(cls, shape: tuple = SHAPE_SCALAR) -> "DomainSpec":
        return cls(EP, shape)

    @classmethod
    def product(cls, factors: Sequence["DomainSpec"]) -> "DomainSpec":
        factors = tuple(factors)
        if any(f.shape != SHAPE_SCALAR for f in factors):
            raise ValueError("product factors must be scalar predicates")
        return cls(PRODUCT, (VECTOR, len(factors)), factors)

    def _shape_matches(self, elem: AlgebraElement) -> bool:
        if self.shape[0] == SCALAR:
            return elem.kind == SCALAR
        return elem.kind == self.shape[0] and len(elem.components) == self.shape[1]

    @staticmethod
    def _component_ok(kind: str, c: PadicNumber) -> bool:
        if kind == UNIT_BALL:
            return c.valuation_floor >= 0
        if kind == UNIT_SPHERE:
            return not c.is_zero and c.valuation == 0
        if kind == EP:
            return (not c.is_zero and c.valuation == 0
                    and c.unit % c.prime == 1)
        raise ValueError(f"unknown domain kind {kind!r}")

    def contains(self, elem: "PadicNumber | AlgebraElement") -> bool:
        elem = as_element(elem)
        if not self._shape_matches(elem):
            return False
        if self.kind == PRODUCT:
            return all(f._component_ok(f.kind, c)
                       for f, c in zip(self.factors, elem.components))
        if self.kind == UNIT_SPHERE and self.shape[0] != SCALAR:
            # max norm 1: all inside the ball, at least one unit component
            return (all(c.valuation_floor >= 0 for c in elem.components)
                    and any(not c.is_zero and c.valuation == 0
                            for c in elem.components))
        return all(self._component_ok(self.kind, c) for c in elem.components)

    def require(self, elem: "PadicNumber | AlgebraElement", what: str = "value") -> None:
        if not self.contains(elem):
            raise DomainError(f"{what} lies outside domain {self.describe()}")

    def describe(self) -> str:
        names = {UNIT_BALL: "unit ball", UNIT_SPHERE: "unit sphere",
                 EP: "E_p", PRODUCT: "product"}
        if self.shape[0] == SCALAR:
            return names[self.kind]
        return f"{names[self.kind]}^{self.shape}"


# -- core utilities ---------------------------------------------------

def product_difference_bound(a: Sequence[AlgebraElement],
                             b: Sequence[AlgebraElement]) -> bool:
    """Check ||prod(a) - prod(b)|| <= max_i ||a_i - b_i|| for unit-ball entries.

    Used as a test oracle; the strong triangle inequality makes it hold
    for every valid input, so a False return indicates a bug.
    """
    if len(a) != len(b):
        raise ValueError("lists must have equal length")
    if not a:
        raise ValueError("lists must be nonempty")
    for i, x in enumerate(list(a) + list(b)):
        if as_element(x).valuation_floor < 0:
            raise DomainError(f"entry {i % len(a)} lies outside the unit ball")
    pa = as_element(a[0])
    pb = as_element(b[0])
    for x, y in zip(a[1:], b[1:]):
        pa = pa * as_element(x)
        pb = pb * as_element(y)
    lhs = (pa - pb).valuation_floor
    rhs = min((as_element(x) - as_element(y)).valuation_floor
              for x, y in zip(a, b))
    return lhs >= rhs


def is_cauchy_gap(trace: Sequence["PadicNumber | AlgebraElement"],
                  target_valuation: int) -> bool:
    """Stopping rule: last successive difference has valuation >= target."""
    if len(trace) < 2:
        raise ValueError("trace must contain at least two entries")
    gap = (as_element(trace[-1]) - as_element(trace[-2])).valuation_floor
    return gap >= target_valuation


def shift(x: AlgebraElement) -> AlgebraElement:
    """Shift a truncated sequence left; the freed last slot becomes 0."""
    if x.kind != SEQ:
        raise ValueError("shift is defined on sequence elements")
    tail = PadicNumber.zero(x.prime, x.components[-1].digits)
    return AlgebraElement.seq(x.components[1:] + (tail,))
