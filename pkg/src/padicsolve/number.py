"""Exact fixed-precision arithmetic over the field of p-adic numbers.

A value is stored as ``p**valuation * unit`` with the unit part tracked to a
fixed count of significant base-p digits, so the value is known exactly
modulo ``p**(valuation + digits)``.  Every norm and valuation statement is
then decidable with integer arithmetic; no floats appear anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

DEFAULT_DIGITS = 60

#: Valuation marker for exact zero; compares greater than every int.
INF = math.inf


class PadicError(ArithmeticError):
    """Base class for arithmetic failures in this package."""


class DomainError(PadicError):
    """An argument lies outside the domain an operation requires."""


class PrecisionError(PadicError):
    """The tracked precision cannot support the requested result."""


class IterationLimitError(PadicError):
    """An iterative solver hit its iteration cap before certifying."""


class CertificateError(PadicError):
    """A certified bound failed to hold; indicates a bug or bad inputs."""


def ord_p(n: int, p: int) -> int:
    """p-adic order of a nonzero integer."""
    if n == 0:
        raise ValueError("ord_p(0) is undefined")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _lift_inverse(unit: int, p: int, digits: int) -> int:
    # Newton on the reciprocal: z <- z*(2 - u*z) doubles the correct digits.
    z = pow(unit % p, -1, p)
    k = 1
    while k < digits:
        k = min(2 * k, digits)
        z = z * (2 - unit * z) % p**k
    return z


@dataclass(frozen=True, slots=True, eq=False)
class PadicNumber:
    """An element of Q_p known modulo ``p**(valuation + digits)``.

    ``unit == 0`` marks zero.  ``valuation`` is then ``None`` (the infinity
    marker) and ``zero_floor`` records the exponent A with the value known
    to vanish modulo ``p**A``; ``zero_floor is None`` means an exact zero.
    A vanishing computed result is never silently promoted to an exact
    zero: the floor is what downstream stopping rules compare against.
    """

    prime: int
    valuation: int | None
    unit: int
    digits: int
    zero_floor: int | None = None

    def __post_init__(self) -> None:
        if self.prime < 2:
            raise ValueError(f"prime must be >= 2, got {self.prime}")
        if self.digits < 1:
            raise ValueError(f"digits must be >= 1, got {self.digits}")
        if self.unit == 0:
            if self.valuation is not None:
                raise ValueError("zero must carry the infinite-valuation marker")
        else:
            if self.valuation is None:
                raise ValueError("nonzero value needs a finite valuation")
            if not 0 < self.unit < self.prime**self.digits:
                raise ValueError("unit out of range for the tracked digits")
            if self.unit % self.prime == 0:
                raise ValueError("unit must not be divisible by the prime")
            if self.zero_floor is not None:
                raise ValueError("zero_floor is reserved for zero values")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, prime: int, digits: int = DEFAULT_DIGITS,
             floor: int | None = None) -> "PadicNumber":
        """Zero marker; ``floor=A`` means only "vanishes mod p**A" is known."""
        return cls(prime, None, 0, digits, floor)

    @classmethod
    def one(cls, prime: int, digits: int = DEFAULT_DIGITS) -> "PadicNumber":
        return cls(prime, 0, 1, digits)

    @classmethod
    def from_int(cls, n: int, prime: int, digits: int = DEFAULT_DIGITS) -> "PadicNumber":
        return cls.from_rational(n, 1, prime, digits)

    @classmethod
    def from_rational(cls, numerator: int, denominator: int, prime: int,
                      digits: int = DEFAULT_DIGITS) -> "PadicNumber":
        """Canonical representation of ``numerator/denominator``.

        The valuation is ``ord_p(numerator) - ord_p(denominator)`` and the
        unit part is the quotient of the prime-to-p parts modulo
        ``p**digits``.
        """
        if denominator == 0:
            raise DomainError("denominator must be nonzero")
        if prime < 2:
            raise ValueError(f"prime must be >= 2, got {prime}")
        if digits < 1:
            raise ValueError(f"digits must be >= 1, got {digits}")
        if numerator == 0:
            return cls.zero(prime, digits)
        a = ord_p(numerator, prime)
        b = ord_p(denominator, prime)
        num_unit = numerator // prime**a
        den_unit = denominator // prime**b
        modulus = prime**digits
        unit = num_unit * _lift_inverse(den_unit % modulus, prime, digits) % modulus
        return cls(prime, a - b, unit, digits)

    # -- basic predicates and views -----------------------------------

    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def is_exact_zero(self) -> bool:
        return self.unit == 0 and self.zero_floor is None

    @property
    def valuation_floor(self) -> int | float:
        """Certified lower bound on the valuation; INF for an exact zero."""
        if self.unit == 0:
            return INF if self.zero_floor is None else self.zero_floor
        return self.valuation

    @property
    def abs_precision(self) -> int | float:
        """Exponent A such that the value is known modulo p**A."""
        if self.unit == 0:
            return INF if self.zero_floor is None else self.zero_floor
        return self.valuation + self.digits

    def norm(self) -> Fraction:
        """Exact norm p**(-valuation); 0 for a zero marker."""
        if self.is_zero:
            return Fraction(0)
        if self.valuation >= 0:
            return Fraction(1, self.prime**self.valuation)
        return Fraction(self.prime ** (-self.valuation))

    def unit_digits(self) -> list[int]:
        """Little-endian base-p digits of the unit part, one per tracked digit."""
        out = []
        u = self.unit
        for _ in range(self.digits):
            u, r = divmod(u, self.prime)
            out.append(r)
        return out

    def residue(self, exponent: int) -> int:
        """The value modulo p**exponent, for p-integral values."""
        if exponent < 0:
            raise ValueError("exponent must be >= 0")
        if self.is_zero:
            if self.valuation_floor >= exponent:
                return 0
            raise PrecisionError(
                f"value only known to vanish mod {self.prime}^{self.zero_floor}")
        if self.valuation < 0:
            raise DomainError("residue undefined for negative valuation")
        if self.abs_precision < exponent:
            raise PrecisionError(
                f"value tracked mod {self.prime}^{self.abs_precision}, "
                f"residue mod {self.prime}^{exponent} requested")
        return self.prime**self.valuation * self.unit % self.prime**exponent

    def text(self) -> str:
        """Canonical text form ``p^v * u (mod p^(v+d))``."""
        if self.is_zero:
            if self.zero_floor is None:
                return "0"
            return f"0 (mod {self.prime}^{self.zero_floor})"
        return (f"{self.prime}^{self.valuation} * {self.unit} "
                f"(mod {self.prime}^{self.valuation + self.digits})")

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"PadicNumber({self.text()})"

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            if other.prime != self.prime:
                raise ValueError(
                    f"mixed primes {self.prime} and {other.prime}")
            return other
        if isinstance(other, int):
            # exact integers deserve the full absolute precision of self,
            # not just its digit count, or sums like p*t + 1 lose digits
            if self.is_zero:
                d = self.digits if self.zero_floor is None else max(
                    self.digits, self.zero_floor)
            else:
                d = self.digits + max(self.valuation, 0)
            return PadicNumber.from_int(other, self.prime, d)
        return None

    def truncate_abs(self, abs_precision: int) -> "PadicNumber":
        """Forget knowledge beyond ``p**abs_precision``."""
        if self.abs_precision <= abs_precision:
            return self
        if self.is_zero:
            return PadicNumber.zero(self.prime, self.digits, floor=abs_precision)
        d = abs_precision - self.valuation
        if d < 1:
            return PadicNumber.zero(self.prime, self.digits, floor=abs_precision)
        return PadicNumber(self.prime, self.valuation,
                           self.unit % self.prime**d, d)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self, other
        p = a.prime
        if a.is_zero and b.is_zero:
            if a.is_exact_zero and b.is_exact_zero:
                return PadicNumber.zero(p, max(a.digits, b.digits))
            floor = min(a.valuation_floor, b.valuation_floor)
            return PadicNumber.zero(p, max(a.digits, b.digits), floor=int(floor))
        if a.is_zero or b.is_zero:
            z, x = (a, b) if a.is_zero else (b, a)
            if z.is_exact_zero:
                return x
            bound = min(z.zero_floor, x.abs_precision)
            if x.valuation >= bound:
                return PadicNumber.zero(p, x.digits, floor=int(bound))
            return x.truncate_abs(int(bound))
        bound = min(a.abs_precision, b.abs_precision)
        v0 = min(a.valuation, b.valuation)
        window = bound - v0
        s = (a.unit * p ** (a.valuation - v0)
             + b.unit * p ** (b.valuation - v0)) % p**window
        if s == 0:
            # exact negations of one representation cancel exactly; any
            # other vanishing only certifies the precision floor
            if (a.valuation == b.valuation and a.digits == b.digits
                    and (a.unit + b.unit) % p**a.digits == 0):
                return PadicNumber.zero(p, max(a.digits, b.digits))
            return PadicNumber.zero(p, max(a.digits, b.digits), floor=bound)
        t = ord_p(s, p)
        val = v0 + t
        return PadicNumber(p, val, s // p**t, bound - val)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        if self.is_zero:
            return self
        return PadicNumber(self.prime, self.valuation,
                           (-self.unit) % self.prime**self.digits, self.digits)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.__add__(-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other.__add__(-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self, other
        p = a.prime
        if a.is_zero or b.is_zero:
            if a.is_exact_zero or b.is_exact_zero:
                return PadicNumber.zero(p, max(a.digits, b.digits))
            floor = a.valuation_floor + b.valuation_floor
            return PadicNumber.zero(p, max(a.digits, b.digits), floor=int(floor))
        d = min(a.digits, b.digits)
        return PadicNumber(p, a.valuation + b.valuation,
                           a.unit * b.unit % p**d, d)

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self) -> "PadicNumber":
        if self.is_exact_zero:
            raise DomainError("division by zero")
        if self.is_zero:
            raise PrecisionError(
                "cannot invert a value indistinguishable from zero "
                f"(vanishes mod {self.prime}^{self.zero_floor})")
        unit = _lift_inverse(self.unit, self.prime, self.digits)
        return PadicNumber(self.prime, -self.valuation, unit, self.digits)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            other.inverse()  # raises the appropriate error
        if self.is_zero:
            if self.is_exact_zero:
                return PadicNumber.zero(self.prime, max(self.digits, other.digits))
            return PadicNumber.zero(self.prime, max(self.digits, other.digits),
                                    floor=self.zero_floor - other.valuation)
        d = min(self.digits, other.digits)
        p = self.prime
        unit = self.unit * _lift_inverse(other.unit % p**d, p, d) % p**d
        return PadicNumber(p, self.valuation - other.valuation, unit, d)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other.__truediv__(self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return PadicNumber.one(self.prime, self.digits)
        if self.is_zero:
            if self.is_exact_zero:
                return self
            return PadicNumber.zero(self.prime, self.digits,
                                    floor=self.zero_floor * n)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = PadicNumber.from_int(other, self.prime, self.digits)
        if not isinstance(other, PadicNumber):
            return NotImplemented
        if self.prime != other.prime:
            return False
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        if self.valuation != other.valuation:
            return False
        d = min(self.digits, other.digits)
        return self.unit % self.prime**d == other.unit % other.prime**d
