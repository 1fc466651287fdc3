"""p-adic exponential and logarithm with exact truncation control.

Both series are summed with enough terms that every omitted term has
valuation at least the target digit count, so truncation never touches
a tracked digit.  Odd primes only: for p >= 3 the convergence balls are
exactly the valuation >= 1 sets, which makes the domain checks integer
comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass

from .number import DomainError, PadicNumber, PrecisionError


@dataclass(frozen=True, slots=True)
class SeriesBudget:
    """Cap on series summation: term count and target absolute precision.

    ``target_digits=None`` derives the target from the argument's own
    tracked precision, the best any series output can honestly claim.
    """

    max_terms: int = 4096
    target_digits: int | None = None

    def __post_init__(self) -> None:
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if self.target_digits is not None and self.target_digits < 1:
            raise ValueError("target_digits must be >= 1")


_DEFAULT_BUDGET = SeriesBudget()


def _int_log(n: int, p: int) -> int:
    # floor(log_p n)
    e = 0
    while n >= p:
        n //= p
        e += 1
    return e


def in_Ep(x: PadicNumber) -> bool:
    """Membership in {|x| = 1, |x - 1| <= 1/p}: unit congruent to 1 mod p."""
    return not x.is_zero and x.valuation == 0 and x.unit % x.prime == 1


def padic_exp(x: PadicNumber, budget: SeriesBudget | None = None) -> PadicNumber:
    """Exponential series 1 + x + x^2/2! + ... inside its convergence ball.

    Requires p >= 3 and valuation(x) >= 1.  The factorial valuation
    (n - digitsum_p(n)) / (p - 1) grows strictly slower than n, so terms
    beyond ceil(target*(p-1) / (v*(p-1)-1)) all vanish at the target.
    """
    budget = budget or _DEFAULT_BUDGET
    p = x.prime
    if p == 2:
        raise DomainError("exp requires an odd prime")
    if x.is_zero:
        if x.is_exact_zero:
            return PadicNumber.one(p, x.digits)
        return PadicNumber(p, 0, 1, x.zero_floor)
    v = x.valuation
    if v < 1:
        raise DomainError(
            f"exp argument must have valuation >= 1, got {v}")
    target = budget.target_digits or (v + x.digits)
    # smallest count with n*(v*(p-1) - 1) >= target*(p-1): every term
    # from there on has valuation >= target
    slope = v * (p - 1) - 1
    n_stop = -(-target * (p - 1) // slope)
    if n_stop - 1 > budget.max_terms:
        raise PrecisionError(
            f"series needs {n_stop - 1} terms, budget allows {budget.max_terms}")
    acc = PadicNumber.one(p, max(x.digits, target))
    term = PadicNumber.one(p, x.digits)
    for i in range(1, n_stop):
        term = term * x / i
        acc = acc + term
    return acc


def padic_log(x: PadicNumber, budget: SeriesBudget | None = None) -> PadicNumber:
    """Logarithm series of x around 1 for |x - 1| < 1.

    Requires p >= 3 and valuation(x - 1) >= 1 (for odd p the open unit
    ball around 1 is exactly that set).  Terms are t^n/n with
    t = x - 1; the cutoff uses ord_p(n) <= floor(log_p n).
    """
    budget = budget or _DEFAULT_BUDGET
    p = x.prime
    if p == 2:
        raise DomainError("log requires an odd prime")
    t = x - 1
    if t.is_zero:
        if t.is_exact_zero:
            return PadicNumber.zero(p, x.digits)
        return PadicNumber.zero(p, x.digits, floor=t.zero_floor)
    v = t.valuation
    if v < 1:
        raise DomainError(
            f"log argument must satisfy valuation(x - 1) >= 1, got {v}")
    target = budget.target_digits or (v + t.digits)
    n_stop = 1
    while n_stop * v - _int_log(n_stop, p) < target:
        n_stop += 1
        if n_stop - 1 > budget.max_terms:
            raise PrecisionError(
                f"series needs more than {budget.max_terms} terms")
    if n_stop == 1:
        return PadicNumber.zero(p, x.digits, floor=target)
    acc = None
    power = PadicNumber.one(p, t.digits)
    for n in range(1, n_stop):
        power = power * t
        term = power / n
        if n % 2 == 0:
            term = -term
        acc = term if acc is None else acc + term
    return acc
