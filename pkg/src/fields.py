"""Scalar coefficient fields.

Two base fields are provided here:
- RationalField: exact ℚ, elements are ``fractions.Fraction`` (always in lowest terms)
- PrimeField: 𝔽ₚ for an odd prime p, elements are ``FpElem``

Each field object knows how to coerce integers, encode elements to the
JSON coefficient format and decode them back. Extension structures
(quadratic algebras, cyclotomic fields) live in ``algebra.py``.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Any, Union
import logging

from sympy import isprime

from .base import FieldMismatchError, ParseError, PreconditionError, SingularError

logger = logging.getLogger(__name__)

# Keeps residues within 62 bits
MAX_PRIME = 1 << 62


def parse_rational(raw: Any, location: str = "coefficient") -> Fraction:
    """Parse a "num/den" (or bare integer) coefficient string.

    Raises:
        ParseError: If the string is not a rational literal
    """
    if isinstance(raw, bool):
        raise ParseError(f"Invalid rational at {location}: {raw!r}", {"location": location})
    if isinstance(raw, int):
        return Fraction(raw)
    if not isinstance(raw, str):
        raise ParseError(f"Invalid rational at {location}: {raw!r}", {"location": location})
    try:
        num, _, den = raw.strip().partition("/")
        return Fraction(int(num), int(den) if den else 1)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"Invalid rational at {location}: {raw!r}", {"location": location})


def format_rational(value: Fraction) -> str:
    """Encode as "num/den"; the denominator is always written."""
    return f"{value.numerator}/{value.denominator}"


class RationalField:
    """The field ℚ."""

    tag = "Q"
    characteristic = 0

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def coerce(self, value: Any) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        raise FieldMismatchError(
            f"Cannot coerce {type(value).__name__} into Q",
            {"field": self.tag, "value_type": type(value).__name__},
        )

    def encode(self, value: Fraction) -> str:
        return format_rational(value)

    def decode(self, raw: Any, location: str = "coefficient") -> Fraction:
        return parse_rational(raw, location)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash(self.tag)

    def __repr__(self) -> str:
        return "RationalField()"


QQ = RationalField()


class FpElem:
    """Canonical residue in [0, p)."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _other(self, other: Any) -> int:
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise FieldMismatchError(
                    f"Mixed prime fields F_{self.p} and F_{other.p}",
                    {"left": self.p, "right": other.p},
                )
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise SingularError(f"Denominator divisible by {self.p}", {"p": self.p})
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other: Any) -> "FpElem":
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return FpElem(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "FpElem":
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return FpElem(self.value - o, self.p)

    def __rsub__(self, other: Any) -> "FpElem":
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return FpElem(o - self.value, self.p)

    def __mul__(self, other: Any) -> "FpElem":
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return FpElem(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self) -> "FpElem":
        return FpElem(-self.value, self.p)

    def inverse(self) -> "FpElem":
        if self.value == 0:
            raise SingularError(f"Inverse of zero in F_{self.p}", {"p": self.p})
        return FpElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other: Any) -> "FpElem":
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self * FpElem(o, self.p).inverse()

    def __rtruediv__(self, other: Any) -> "FpElem":
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return FpElem(o, self.p) * self.inverse()

    def __pow__(self, n: int) -> "FpElem":
        if n < 0:
            return self.inverse() ** (-n)
        return FpElem(pow(self.value, n, self.p), self.p)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FpElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.p))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"FpElem({self.value}, {self.p})"


class PrimeField:
    """The field 𝔽ₚ for an odd prime p. Use ``prime_field(p)`` to get a shared instance."""

    characteristic: int

    def __init__(self, p: int):
        if p <= 2 or p >= MAX_PRIME or not isprime(p):
            raise PreconditionError(
                f"F_p requires an odd prime below {MAX_PRIME}, got {p}",
                {"p": p},
            )
        self.p = p
        self.characteristic = p
        self.tag = f"F_{p}"
        self.zero = FpElem(0, p)
        self.one = FpElem(1, p)

    def coerce(self, value: Any) -> FpElem:
        if isinstance(value, FpElem):
            if value.p != self.p:
                raise FieldMismatchError(
                    f"Element of F_{value.p} used in {self.tag}",
                    {"field": self.tag, "element_p": value.p},
                )
            return value
        if isinstance(value, int):
            return FpElem(value, self.p)
        if isinstance(value, Fraction):
            return self.zero + value
        raise FieldMismatchError(
            f"Cannot coerce {type(value).__name__} into {self.tag}",
            {"field": self.tag, "value_type": type(value).__name__},
        )

    def encode(self, value: FpElem) -> int:
        return value.value

    def decode(self, raw: Any, location: str = "coefficient") -> FpElem:
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise ParseError(f"Invalid F_{self.p} element at {location}: {raw!r}", {"location": location})
        return FpElem(raw, self.p)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("F", self.p))

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"


@lru_cache(maxsize=256)
def prime_field(p: int) -> PrimeField:
    """Shared PrimeField instance for p (primality is tested once)."""
    return PrimeField(p)


def reduce_rational(value: Union[Fraction, int], p: int) -> int:
    """Image of a p-integral rational in [0, p).

    Raises:
        SingularError: If p divides the denominator
    """
    value = Fraction(value)
    if value.denominator % p == 0:
        raise SingularError(f"{value} is not {p}-integral", {"p": p})
    return value.numerator * pow(value.denominator, -1, p) % p
