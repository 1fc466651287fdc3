"""Contractive map descriptors and sampled contraction certificates.

A map declares its contraction exponent k (the bound is p**-k); the
ultrametric form of contractivity is the integer statement

    valuation(f(xs) - f(ys)) >= k + min_i valuation(x_i - y_i)

which ``verify_contraction`` checks empirically on seeded random pairs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .algebra import AlgebraElement, DomainSpec
from .number import DEFAULT_DIGITS, INF
from .sampling import sample_args


@dataclass(frozen=True, slots=True)
class ContractiveMap:
    """Arity-m map on a domain with a declared contraction exponent.

    ``dependency`` masks arguments the map actually reads; unread
    arguments are ignored when measuring contraction gaps.
    """

    arity: int
    domain: DomainSpec
    contraction_exponent: int | float
    eval_fn: Callable[..., AlgebraElement]
    prime: int
    digits: int = DEFAULT_DIGITS
    label: str = ""
    dependency: tuple[bool, ...] | None = None

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ValueError("arity must be >= 1")
        if self.contraction_exponent < 1:
            raise ValueError("contraction exponent must be >= 1")
        if self.dependency is not None and len(self.dependency) != self.arity:
            raise ValueError("dependency mask length must equal arity")

    def __call__(self, *args: AlgebraElement) -> AlgebraElement:
        if len(args) != self.arity:
            raise ValueError(f"{self.label or 'map'} expects {self.arity} arguments")
        return self.eval_fn(*args)

    def diagonal(self) -> "ContractiveMap":
        """The arity-1 map x -> f(x, ..., x)."""
        if self.arity == 1:
            return self
        fn = self.eval_fn
        m = self.arity
        return ContractiveMap(
            1, self.domain, self.contraction_exponent,
            lambda x: fn(*((x,) * m)),
            prime=self.prime, digits=self.digits,
            label=f"{self.label or 'map'}.diag")


@dataclass(frozen=True, slots=True)
class ContractionReport:
    label: str
    samples: int
    min_observed_gap: int | float
    declared_exponent: int | float
    range_ok: bool
    passed: bool


def verify_contraction(f: ContractiveMap, samples: int = 1000,
                       seed: int = 0) -> ContractionReport:
    """Sample argument pairs and report the worst contraction gap.

    The gap of one pair is valuation(f(xs)-f(ys)) minus the smallest
    argument-difference valuation over depended coordinates; the check
    passes when the minimum over all samples reaches the declared
    exponent and every image stays inside the domain.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    dep = f.dependency or (True,) * f.arity
    min_gap: int | float = INF
    range_ok = True
    for _ in range(samples):
        xs = sample_args(f.domain, f.arity, f.prime, f.digits, rng)
        ys = sample_args(f.domain, f.arity, f.prime, f.digits, rng)
        fx, fy = f(*xs), f(*ys)
        if not (f.domain.contains(fx) and f.domain.contains(fy)):
            range_ok = False
        arg_gap = min(((x - y).valuation_floor
                       for x, y, d in zip(xs, ys, dep) if d), default=INF)
        if arg_gap == INF:
            continue
        out_gap = (fx - fy).valuation_floor
        gap = INF if out_gap == INF else out_gap - arg_gap
        min_gap = min(min_gap, gap)
    passed = range_ok and min_gap >= f.contraction_exponent
    return ContractionReport(f.label, samples, min_gap,
                             f.contraction_exponent, range_ok, passed)


def constant_map(value: AlgebraElement, domain: DomainSpec, arity: int = 1,
                 label: str = "constant") -> ContractiveMap:
    """Map ignoring all arguments; contraction exponent is infinite."""
    return ContractiveMap(arity, domain, INF, lambda *args: value,
                          prime=value.prime,
                          digits=min(c.digits for c in value.components),
                          label=label, dependency=(False,) * arity)


def identity_map(domain: DomainSpec, prime: int, digits: int = DEFAULT_DIGITS,
                 declared_exponent: int = 1) -> ContractiveMap:
    """The identity with a (knowingly false) declared exponent, for tests."""
    return ContractiveMap(1, domain, declared_exponent, lambda x: x,
                          prime=prime, digits=digits, label="identity")
