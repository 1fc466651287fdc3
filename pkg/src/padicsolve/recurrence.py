"""Certified fixed-point solvers for sum-of-products recurrences.

The driving relation is

    x[n+L] = sum_k prod_i f_i^k(x[n + off_i^k], ..., x[n + off_i^k + m - 1])

with every factor contractive on a common domain.  Iterates converge
geometrically in the p-adic norm: each step is guaranteed to raise the
valuation of successive differences by at least the smallest declared
contraction exponent, and the solvers return that audit trail as a
certificate rather than a bare limit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .algebra import AlgebraElement
from .contraction import ContractiveMap
from .number import (INF, IterationLimitError, PrecisionError)
from .sampling import sample_element

OFFSETS_PRINTED = "printed"    # gaps between consecutive offsets in [2, m-1]
OFFSETS_RELAXED = "relaxed"    # gaps in [1, m-1]: adjacent windows allowed
OFFSETS_ANY = "any"            # any nondecreasing offsets starting at 0

_RULES = (OFFSETS_PRINTED, OFFSETS_RELAXED, OFFSETS_ANY)


@dataclass(frozen=True, slots=True)
class RecurrenceSpec:
    """M summands of N factors each, with per-factor window offsets.

    The first offset of every summand is 0 and the window length is
    L = max_k offsets[k][-1] + m, the minimum making the relation
    well-posed.  The printed offset rule requires consecutive offsets to
    differ by 2..m-1; ``relaxed`` admits adjacent windows, ``any`` lifts
    the constraint entirely (used for internally built power equations).
    """

    maps: tuple[tuple[ContractiveMap, ...], ...]
    offsets: tuple[tuple[int, ...], ...]
    offset_rule: str = OFFSETS_PRINTED

    def __post_init__(self) -> None:
        if self.offset_rule not in _RULES:
            raise ValueError(f"unknown offset rule {self.offset_rule!r}")
        if not self.maps or len(self.maps) != len(self.offsets):
            raise ValueError("need one offset tuple per summand")
        n = len(self.maps[0])
        if n < 1 or any(len(row) != n for row in self.maps):
            raise ValueError("all summands must have the same factor count")
        if any(len(row) != n for row in self.offsets):
            raise ValueError("offsets must match the factor count")
        first = self.maps[0][0]
        for row in self.maps:
            for f in row:
                if f.arity != first.arity:
                    raise ValueError("all factor maps must share one arity")
                if f.domain != first.domain:
                    raise ValueError("all factor maps must share one domain")
                if f.prime != first.prime:
                    raise ValueError("all factor maps must share one prime")
        m = first.arity
        for row in self.offsets:
            if row[0] != 0:
                raise ValueError("each summand's first offset must be 0")
            for prev, cur in zip(row, row[1:]):
                gap = cur - prev
                if self.offset_rule == OFFSETS_ANY:
                    if gap < 0:
                        raise ValueError("offsets must be nondecreasing")
                    continue
                low = 2 if self.offset_rule == OFFSETS_PRINTED else 1
                if not low <= gap <= m - 1:
                    raise ValueError(
                        f"offset gap {gap} violates rule "
                        f"{self.offset_rule!r} (need {low}..{m - 1})")

    @property
    def summands(self) -> int:
        return len(self.maps)

    @property
    def factors(self) -> int:
        return len(self.maps[0])

    @property
    def arity(self) -> int:
        return self.maps[0][0].arity

    @property
    def window_length(self) -> int:
        return max(row[-1] for row in self.offsets) + self.arity

    @property
    def domain(self):
        return self.maps[0][0].domain

    @property
    def prime(self) -> int:
        return self.maps[0][0].prime

    @property
    def min_exponent(self) -> int | float:
        return min(f.contraction_exponent for row in self.maps for f in row)


@dataclass(frozen=True, slots=True)
class ConvergenceCertificate:
    """Solver output: the limit plus the evidence it is a fixed point.

    ``trace`` holds the successive-difference valuations, ``iterations``
    their count, ``residual_valuation`` the valuation of x - RHS(x) at
    the limit and ``guaranteed_valuation`` the a-priori geometric bound
    iterations * min exponent.  ``history`` keeps the iterates when
    requested.
    """

    iterations: int
    limit: AlgebraElement
    residual_valuation: int | float
    guaranteed_valuation: int | float
    trace: tuple[int | float, ...]
    history: tuple[AlgebraElement, ...] | None = None


def step(spec: RecurrenceSpec, window: Sequence[AlgebraElement],
         index: int = 0) -> AlgebraElement:
    """One application of the recurrence to a full window.

    ``index`` is the sequence position of the first window entry, used
    only to name offending values in errors.
    """
    if len(window) != spec.window_length:
        raise ValueError(
            f"window must hold {spec.window_length} values, got {len(window)}")
    for j, w in enumerate(window):
        spec.domain.require(w, f"window value x_{index + j}")
    m = spec.arity
    total = None
    for row, offs in zip(spec.maps, spec.offsets):
        prod = None
        for f, off in zip(row, offs):
            value = f(*window[off:off + m])
            prod = value if prod is None else prod * value
        total = prod if total is None else total + prod
    return total


def fixed_point_residual(spec: RecurrenceSpec, x: AlgebraElement) -> int | float:
    """Valuation of x - RHS(x) with every argument equal to x."""
    return (x - _diagonal_rhs(spec, x)).valuation_floor


def _diagonal_rhs(spec: RecurrenceSpec, x: AlgebraElement) -> AlgebraElement:
    args = (x,) * spec.arity
    total = None
    for row in spec.maps:
        prod = None
        for f in row:
            value = f(*args)
            prod = value if prod is None else prod * value
        total = prod if total is None else total + prod
    return total


def _all_precision_limited(diff: AlgebraElement) -> bool:
    return all(c.is_zero for c in diff.components) and any(
        not c.is_exact_zero for c in diff.components)


def solve_recurrence(spec: RecurrenceSpec, initial: Sequence[AlgebraElement],
                     target_valuation: int, max_iter: int = 512,
                     keep_history: bool = False) -> ConvergenceCertificate:
    """Iterate the recurrence until the Cauchy gap and residual certify.

    Stops when the successive-difference valuation reaches the target
    AND the fixed-point residual at the candidate limit does too; both
    conditions must hold, as a defense against precision bugs.
    """
    length = spec.window_length
    if len(initial) < length:
        raise ValueError(f"need {length} initial values, got {len(initial)}")
    window = list(initial[:length])
    trace: list[int | float] = []
    history: list[AlgebraElement] = []
    prev = window[-1]
    for n in range(1, max_iter + 1):
        x = step(spec, window, index=n)
        diff = x - prev
        trace.append(diff.valuation_floor)
        if keep_history:
            history.append(x)
        window.pop(0)
        window.append(x)
        prev = x
        if trace[-1] >= target_valuation:
            residual = x - _diagonal_rhs(spec, x)
            rval = residual.valuation_floor
            if rval >= target_valuation:
                k = spec.min_exponent
                return ConvergenceCertificate(
                    iterations=n, limit=x, residual_valuation=rval,
                    guaranteed_valuation=n * k, trace=tuple(trace),
                    history=tuple(history) if keep_history else None)
            if _all_precision_limited(residual):
                raise PrecisionError(
                    f"residual vanishes at precision {rval} < target "
                    f"{target_valuation}; raise the working digit count")
    raise IterationLimitError(
        f"no certificate after {max_iter} iterations "
        f"(last gap {trace[-1] if trace else 'n/a'}, target {target_valuation})")


def power_equation_spec(f: ContractiveMap, power: int) -> RecurrenceSpec:
    """Spec for x = (f(x, ..., x))**power as a one-step iteration."""
    if power < 1:
        raise ValueError("power must be >= 1")
    g = f.diagonal()
    return RecurrenceSpec(((g,) * power,), ((0,) * power,),
                          offset_rule=OFFSETS_ANY)


def solve_power_fixed_point(f: ContractiveMap, power: int,
                            target_valuation: int,
                            initial: AlgebraElement | None = None,
                            seed: int = 0, max_iter: int = 512,
                            keep_history: bool = False) -> ConvergenceCertificate:
    """Solve x = (f(x, ..., x))**power on the map's domain."""
    spec = power_equation_spec(f, power)
    if initial is None:
        initial = sample_element(f.domain, f.prime, f.digits, random.Random(seed))
    return solve_recurrence(spec, [initial], target_valuation,
                            max_iter=max_iter, keep_history=keep_history)


# -- coupled three-sequence systems ------------------------------------

@dataclass(frozen=True, slots=True)
class CoupledSpec:
    """Three families of factor pairs driving a staggered triple iteration.

    Each family is a tuple of (first, second) arity-2 maps on a shared
    domain; the x-update sums first(x, y) * second(y, z) over its family,
    then the y-update reuses the fresh x and the z-update both.
    """

    f_pairs: tuple[tuple[ContractiveMap, ContractiveMap], ...]
    g_pairs: tuple[tuple[ContractiveMap, ContractiveMap], ...]
    h_pairs: tuple[tuple[ContractiveMap, ContractiveMap], ...]

    def __post_init__(self) -> None:
        fams = (self.f_pairs, self.g_pairs, self.h_pairs)
        if any(not fam for fam in fams):
            raise ValueError("each family needs at least one pair")
        ref = self.f_pairs[0][0]
        for fam in fams:
            for pair in fam:
                if len(pair) != 2:
                    raise ValueError("families consist of map pairs")
                for f in pair:
                    if f.arity != 2:
                        raise ValueError("coupled maps must have arity 2")
                    if f.domain != ref.domain or f.prime != ref.prime:
                        raise ValueError("coupled maps must share domain and prime")

    @property
    def domain(self):
        return self.f_pairs[0][0].domain

    @property
    def prime(self) -> int:
        return self.f_pairs[0][0].prime

    @property
    def min_exponent(self) -> int | float:
        return min(f.contraction_exponent
                   for fam in (self.f_pairs, self.g_pairs, self.h_pairs)
                   for pair in fam for f in pair)


def _pair_sum(pairs, a: AlgebraElement, b: AlgebraElement,
              c: AlgebraElement) -> AlgebraElement:
    total = None
    for first, second in pairs:
        term = first(a, b) * second(b, c)
        total = term if total is None else total + term
    return total


def coupled_residuals(spec: CoupledSpec, triple) -> tuple:
    """Valuations of the three equation residuals at a candidate triple."""
    x, y, z = triple
    rx = (x - _pair_sum(spec.f_pairs, x, y, z)).valuation_floor
    ry = (y - _pair_sum(spec.g_pairs, x, y, z)).valuation_floor
    rz = (z - _pair_sum(spec.h_pairs, x, y, z)).valuation_floor
    return rx, ry, rz


def solve_coupled(spec: CoupledSpec, initial, target_valuation: int,
                  max_iter: int = 512, keep_history: bool = False):
    """Run the staggered triple iteration to a joint certificate.

    Returns one ConvergenceCertificate per component sequence; the
    envelope max of the three difference norms shrinks by the factor
    p**-k every step, so the three traces certify jointly.
    """
    x, y, z = initial
    spec.domain.require(x, "initial x")
    spec.domain.require(y, "initial y")
    spec.domain.require(z, "initial z")
    traces: tuple[list, list, list] = ([], [], [])
    history: list[tuple] = []
    k = spec.min_exponent
    for n in range(1, max_iter + 1):
        x1 = _pair_sum(spec.f_pairs, x, y, z)
        spec.domain.require(x1, f"iterate x_{n + 1}")
        y1 = _pair_sum(spec.g_pairs, x1, y, z)
        spec.domain.require(y1, f"iterate y_{n + 1}")
        z1 = _pair_sum(spec.h_pairs, x1, y1, z)
        spec.domain.require(z1, f"iterate z_{n + 1}")
        gaps = ((x1 - x).valuation_floor, (y1 - y).valuation_floor,
                (z1 - z).valuation_floor)
        for t, g in zip(traces, gaps):
            t.append(g)
        if keep_history:
            history.append((x1, y1, z1))
        x, y, z = x1, y1, z1
        if min(gaps) >= target_valuation:
            residuals = coupled_residuals(spec, (x, y, z))
            if min(residuals) >= target_valuation:
                guaranteed = (n - 1) * k
                certs = []
                for limit, res, trace in zip((x, y, z), residuals, traces):
                    certs.append(ConvergenceCertificate(
                        iterations=n, limit=limit, residual_valuation=res,
                        guaranteed_valuation=guaranteed, trace=tuple(trace),
                        history=tuple(h[len(certs)] for h in history)
                        if keep_history else None))
                return tuple(certs)
    raise IterationLimitError(
        f"coupled iteration exceeded {max_iter} steps without certifying")
