"""Seeded random sampling of domain members, exact by construction."""

from __future__ import annotations

import random

from .algebra import (EP, PRODUCT, SCALAR, SEQ, UNIT_BALL, UNIT_SPHERE,
                      AlgebraElement, DomainSpec)
from .number import DEFAULT_DIGITS, PadicNumber, ord_p


def sample_scalar(kind: str, prime: int, digits: int,
                  rng: random.Random) -> PadicNumber:
    if kind == EP:
        # 1 + p * (uniform digits): membership by construction
        unit = 1 + prime * rng.randrange(prime ** (digits - 1))
        return PadicNumber(prime, 0, unit, digits)
    if kind == UNIT_SPHERE:
        unit = rng.randrange(1, prime) + prime * rng.randrange(prime ** (digits - 1))
        return PadicNumber(prime, 0, unit, digits)
    if kind == UNIT_BALL:
        r = rng.randrange(prime**digits)
        if r == 0:
            return PadicNumber.zero(prime, digits)
        t = ord_p(r, prime)
        return PadicNumber(prime, t, r // prime**t, digits - t)
    raise ValueError(f"cannot sample domain kind {kind!r}")


def sample_element(domain: DomainSpec, prime: int,
                   digits: int = DEFAULT_DIGITS,
                   rng: random.Random | None = None) -> AlgebraElement:
    """Draw one element of the domain, uniformly over tracked residues."""
    rng = rng or random.Random(0)
    if domain.kind == PRODUCT:
        comps = [sample_scalar(f.kind, prime, digits, rng) for f in domain.factors]
        return AlgebraElement.vector(comps)
    if domain.shape[0] == SCALAR:
        return AlgebraElement.scalar(sample_scalar(domain.kind, prime, digits, rng))
    count = domain.shape[1]
    if domain.kind == UNIT_SPHERE:
        # ball components with at least one forced onto the sphere
        comps = [sample_scalar(UNIT_BALL, prime, digits, rng) for _ in range(count)]
        comps[rng.randrange(count)] = sample_scalar(UNIT_SPHERE, prime, digits, rng)
    else:
        comps = [sample_scalar(domain.kind, prime, digits, rng) for _ in range(count)]
    if domain.shape[0] == SEQ:
        return AlgebraElement.seq(comps)
    return AlgebraElement.vector(comps)


def sample_args(domain: DomainSpec, arity: int, prime: int,
                digits: int = DEFAULT_DIGITS,
                rng: random.Random | None = None) -> tuple[AlgebraElement, ...]:
    rng = rng or random.Random(0)
    return tuple(sample_element(domain, prime, digits, rng) for _ in range(arity))
