"""Quadratic algebras ℚ[ω], ℚ[i] and cyclotomic fields ℚ(ζₚ).

Coordinates:
- EISENSTEIN: (a, b) stands for a − b·ω with ω² + ω + 1 = 0; norm a² + ab + b²
- GAUSSIAN: (a, b) stands for a + b·i with i² + 1 = 0; norm a² + b²
- ℚ(ζₚ): residues modulo Φₚ = 1 + z + ... + z^(p−1), stored as p − 1 coefficients
"""

from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterable, Tuple
import logging

from sympy import isprime

from .base import FieldMismatchError, ParseError, PreconditionError, SingularError
from .fields import QQ, format_rational, parse_rational
from .poly import Poly

logger = logging.getLogger(__name__)

EISENSTEIN = "eisenstein"
GAUSSIAN = "gaussian"
ALGEBRA_TAGS = (EISENSTEIN, GAUSSIAN)


def _scalar(value: Any) -> Any:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    return None


class QuadElem:
    """Element of ℚ[ω]/(ω²+ω+1) or ℚ[i]/(i²+1) in the coordinates above."""

    __slots__ = ("a", "b", "alg")

    def __init__(self, a: Any, b: Any, alg: str):
        if alg not in ALGEBRA_TAGS:
            raise PreconditionError(f"Unknown quadratic algebra '{alg}'", {"alg": alg})
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.alg = alg

    def _check(self, other: "QuadElem") -> None:
        if other.alg != self.alg:
            raise FieldMismatchError(
                f"Quadratic algebra mismatch: {self.alg} vs {other.alg}",
                {"left": self.alg, "right": other.alg},
            )

    def _lift(self, other: Any) -> Any:
        if isinstance(other, QuadElem):
            self._check(other)
            return other
        s = _scalar(other)
        if s is None:
            return None
        return QuadElem(s, 0, self.alg)

    def __add__(self, other: Any) -> "QuadElem":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.a + o.a, self.b + o.b, self.alg)

    __radd__ = __add__

    def __neg__(self) -> "QuadElem":
        return QuadElem(-self.a, -self.b, self.alg)

    def __sub__(self, other: Any) -> "QuadElem":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.a - o.a, self.b - o.b, self.alg)

    def __rsub__(self, other: Any) -> "QuadElem":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> "QuadElem":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return quad_mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "QuadElem":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return quad_mul(self, quad_inv(o))

    def __rtruediv__(self, other: Any) -> "QuadElem":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return quad_mul(o, quad_inv(self))

    def __pow__(self, n: int) -> "QuadElem":
        base = self if n >= 0 else quad_inv(self)
        result = QuadElem(1, 0, self.alg)
        for _ in range(abs(n)):
            result = quad_mul(result, base)
        return result

    def norm(self) -> Fraction:
        if self.alg == EISENSTEIN:
            return self.a * self.a + self.a * self.b + self.b * self.b
        return self.a * self.a + self.b * self.b

    def conjugate(self) -> "QuadElem":
        if self.alg == EISENSTEIN:
            # conj(ω) = ω² = −1 − ω
            return QuadElem(self.a + self.b, -self.b, self.alg)
        return QuadElem(self.a, -self.b, self.alg)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadElem):
            return (self.alg, self.a, self.b) == (other.alg, other.a, other.b)
        s = _scalar(other)
        if s is not None:
            return self.b == 0 and self.a == s
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.alg, self.a, self.b))

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __repr__(self) -> str:
        sym = "w" if self.alg == EISENSTEIN else "i"
        sign = "-" if self.alg == EISENSTEIN else "+"
        return f"({self.a} {sign} {self.b}*{sym})"

    def to_json(self) -> Dict[str, str]:
        return {"a": format_rational(self.a), "b": format_rational(self.b), "alg": self.alg}

    @classmethod
    def from_json(cls, raw: Any, location: str = "quad") -> "QuadElem":
        if not isinstance(raw, dict) or set(raw) != {"a", "b", "alg"}:
            raise ParseError(f"Expected {{a, b, alg}} object at {location}", {"location": location})
        if raw["alg"] not in ALGEBRA_TAGS:
            raise ParseError(f"Unknown algebra {raw['alg']!r} at {location}", {"location": location})
        return cls(parse_rational(raw["a"], f"{location}.a"), parse_rational(raw["b"], f"{location}.b"), raw["alg"])


def quad_mul(x: QuadElem, y: QuadElem) -> QuadElem:
    """Product under the defining relation.

    Raises:
        FieldMismatchError: If the algebra tags differ
    """
    x._check(y)
    a, b, c, d = x.a, x.b, y.a, y.b
    if x.alg == EISENSTEIN:
        # (a − bω)(c − dω) = (ac − bd) − (ad + bc + bd)ω
        return QuadElem(a * c - b * d, a * d + b * c + b * d, x.alg)
    return QuadElem(a * c - b * d, a * d + b * c, x.alg)


def quad_inv(x: QuadElem) -> QuadElem:
    """Inverse as conjugate / norm.

    Raises:
        SingularError: If the norm is zero
    """
    n = x.norm()
    if n == 0:
        raise SingularError("Zero-norm element is not invertible", {"element": x.to_json()})
    c = x.conjugate()
    return QuadElem(c.a / n, c.b / n, x.alg)


def norm_one_param(t: Any, alg: str) -> QuadElem:
    """Rational point of the norm-one conic through the base point (1, 0).

    The denominators 1 + t + t² and 1 + t² have no rational zeros.
    """
    t = Fraction(t)
    if alg == EISENSTEIN:
        den = 1 + t + t * t
        return QuadElem((1 - t * t) / den, t * (2 + t) / den, alg)
    if alg == GAUSSIAN:
        den = 1 + t * t
        return QuadElem((1 - t * t) / den, 2 * t / den, alg)
    raise PreconditionError(f"Unknown quadratic algebra '{alg}'", {"alg": alg})


class QuadraticAlgebra:
    """Coefficient-field adapter so polynomials can carry QuadElem coefficients."""

    characteristic = 0

    def __init__(self, alg: str):
        if alg not in ALGEBRA_TAGS:
            raise PreconditionError(f"Unknown quadratic algebra '{alg}'", {"alg": alg})
        self.alg = alg
        self.tag = "Q[omega]" if alg == EISENSTEIN else "Q[i]"
        self.zero = QuadElem(0, 0, alg)
        self.one = QuadElem(1, 0, alg)

    def coerce(self, value: Any) -> QuadElem:
        if isinstance(value, QuadElem):
            if value.alg != self.alg:
                raise FieldMismatchError(f"{value.alg} element in {self.tag}", {"field": self.tag})
            return value
        s = _scalar(value)
        if s is None:
            raise FieldMismatchError(f"Cannot coerce {type(value).__name__} into {self.tag}", {"field": self.tag})
        return QuadElem(s, 0, self.alg)

    def encode(self, value: QuadElem) -> Dict[str, str]:
        return value.to_json()

    def decode(self, raw: Any, location: str = "coefficient") -> QuadElem:
        elem = QuadElem.from_json(raw, location)
        return self.coerce(elem)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QuadraticAlgebra) and other.alg == self.alg

    def __hash__(self) -> int:
        return hash(("quad", self.alg))


# Cyclotomic fields


class CycloElem:
    """Residue class modulo Φₚ, stored as p − 1 rational coefficients."""

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs: Iterable[Any], p: int):
        self.p = p
        self.coeffs: Tuple[Fraction, ...] = _reduce_cyclo([Fraction(c) for c in coeffs], p)

    @classmethod
    def _raw(cls, coeffs: Tuple[Fraction, ...], p: int) -> "CycloElem":
        elem = cls.__new__(cls)
        elem.coeffs = coeffs
        elem.p = p
        return elem

    @property
    def rep(self) -> Poly:
        return Poly(QQ, self.coeffs)

    def _lift(self, other: Any) -> Any:
        if isinstance(other, CycloElem):
            if other.p != self.p:
                raise FieldMismatchError(
                    f"Cyclotomic fields differ: p={self.p} vs p={other.p}",
                    {"left": self.p, "right": other.p},
                )
            return other
        s = _scalar(other)
        if s is None:
            return None
        return CycloElem._raw((s,) + (Fraction(0),) * (self.p - 2), self.p)

    def __add__(self, other: Any) -> "CycloElem":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return CycloElem._raw(tuple(x + y for x, y in zip(self.coeffs, o.coeffs)), self.p)

    __radd__ = __add__

    def __neg__(self) -> "CycloElem":
        return CycloElem._raw(tuple(-x for x in self.coeffs), self.p)

    def __sub__(self, other: Any) -> "CycloElem":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return CycloElem._raw(tuple(x - y for x, y in zip(self.coeffs, o.coeffs)), self.p)

    def __rsub__(self, other: Any) -> "CycloElem":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> "CycloElem":
        s = _scalar(other)
        if s is not None:
            return CycloElem._raw(tuple(x * s for x in self.coeffs), self.p)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return cyclo_mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "CycloElem":
        s = _scalar(other)
        if s is not None:
            if s == 0:
                raise SingularError("Division by zero in cyclotomic field", {"p": self.p})
            return CycloElem._raw(tuple(x / s for x in self.coeffs), self.p)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return cyclo_mul(self, cyclo_inv(o))

    def __rtruediv__(self, other: Any) -> "CycloElem":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return cyclo_mul(o, cyclo_inv(self))

    def __pow__(self, n: int) -> "CycloElem":
        base = self if n >= 0 else cyclo_inv(self)
        result = cyclotomic_field(self.p).one
        n = abs(n)
        while n:
            if n & 1:
                result = cyclo_mul(result, base)
            n >>= 1
            if n:
                base = cyclo_mul(base, base)
        return result

    def rational_part(self) -> Any:
        """The rational value if the element lies in ℚ, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CycloElem):
            return self.p == other.p and self.coeffs == other.coeffs
        s = _scalar(other)
        if s is not None:
            return self.rational_part() == s
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __repr__(self) -> str:
        return f"CycloElem({[str(c) for c in self.coeffs]}, p={self.p})"

    def to_json(self) -> Dict[str, Any]:
        return {"p": self.p, "rep": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, raw: Any, location: str = "cyclo") -> "CycloElem":
        if not isinstance(raw, dict) or set(raw) != {"p", "rep"}:
            raise ParseError(f"Expected {{p, rep}} object at {location}", {"location": location})
        p, rep = raw["p"], raw["rep"]
        if not isinstance(p, int) or not isinstance(rep, list) or len(rep) > p - 1:
            raise ParseError(f"Malformed cyclotomic element at {location}", {"location": location})
        return cls([parse_rational(c, f"{location}.rep[{i}]") for i, c in enumerate(rep)], p)


def _reduce_cyclo(coeffs: list, p: int) -> Tuple[Fraction, ...]:
    """Reduce a coefficient list modulo Φₚ, using z^p = 1 then z^(p−1) = −(1 + ... + z^(p−2))."""
    folded = [Fraction(0)] * p
    for k, c in enumerate(coeffs):
        folded[k % p] += c
    top = folded[p - 1]
    if top:
        return tuple(c - top for c in folded[: p - 1])
    return tuple(folded[: p - 1])


def cyclo_mul(x: CycloElem, y: CycloElem) -> CycloElem:
    """Product modulo Φₚ, reduced eagerly."""
    y = x._lift(y)
    p = x.p
    prod = [Fraction(0)] * (2 * p - 3)
    for i, a in enumerate(x.coeffs):
        if not a:
            continue
        for j, b in enumerate(y.coeffs):
            if b:
                prod[i + j] += a * b
    return CycloElem._raw(_reduce_cyclo(prod, p), p)


def cyclo_inv(x: CycloElem) -> CycloElem:
    """Inverse through the extended gcd of the representative with Φₚ.

    Raises:
        SingularError: If x = 0
    """
    if not x:
        raise SingularError("Inverse of zero in cyclotomic field", {"p": x.p})
    phi = Poly(QQ, [1] * x.p)
    g, s, _ = x.rep.xgcd(phi)
    if g.degree != 0:
        raise SingularError("Representative shares a factor with the cyclotomic polynomial", {"p": x.p})
    return CycloElem(s.coeffs, x.p)


class CyclotomicField:
    """ℚ(ζₚ) as a coefficient field. Use ``cyclotomic_field(p)`` for a shared instance."""

    characteristic = 0

    def __init__(self, p: int):
        if p < 3 or not isprime(p):
            raise PreconditionError(f"Cyclotomic field needs an odd prime, got {p}", {"p": p})
        self.p = p
        self.tag = f"Q(zeta_{p})"
        self.zero = CycloElem._raw((Fraction(0),) * (p - 1), p)
        self.one = CycloElem._raw((Fraction(1),) + (Fraction(0),) * (p - 2), p)
        self.zeta = CycloElem([0, 1], p)

    def zeta_power(self, j: int) -> CycloElem:
        j %= self.p
        coeffs = [0] * (j + 1)
        coeffs[j] = 1
        return CycloElem(coeffs, self.p)

    def coerce(self, value: Any) -> CycloElem:
        if isinstance(value, CycloElem):
            if value.p != self.p:
                raise FieldMismatchError(f"Element of Q(zeta_{value.p}) used in {self.tag}", {"field": self.tag})
            return value
        s = _scalar(value)
        if s is None:
            raise FieldMismatchError(f"Cannot coerce {type(value).__name__} into {self.tag}", {"field": self.tag})
        return self.one * s

    def encode(self, value: CycloElem) -> Dict[str, Any]:
        return value.to_json()

    def decode(self, raw: Any, location: str = "coefficient") -> CycloElem:
        return self.coerce(CycloElem.from_json(raw, location))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CyclotomicField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("cyclo", self.p))


@lru_cache(maxsize=64)
def cyclotomic_field(p: int) -> CyclotomicField:
    return CyclotomicField(p)
