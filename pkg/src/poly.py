"""Dense univariate polynomials over a coefficient field.

A polynomial is an immutable tuple of coefficients, index = degree, with
trailing zeros stripped. The coefficient field is any object exposing
``zero``, ``one``, ``coerce``, ``encode``, ``decode`` and ``characteristic``
(see ``fields.py`` and ``algebra.py``).

Resultants, discriminants and square-free tests over ℚ go through sympy's
dense subresultant machinery; other fields use a plain Euclidean scheme.
"""

from fractions import Fraction
from typing import Any, Iterable, List, Sequence, Tuple
import logging

from sympy.polys.domains import QQ as SQQ
from sympy.polys.euclidtools import dup_discriminant, dup_resultant
from sympy.polys.sqfreetools import dup_sqf_p

from .base import FieldMismatchError, ParseError, PreconditionError, SingularError
from .fields import QQ, RationalField

logger = logging.getLogger(__name__)

# Degree of the zero polynomial. Adding it to any degree stays at the sentinel.
ZERO_DEGREE = float("-inf")


class Poly:
    """Immutable dense polynomial ``coeffs[0] + coeffs[1]*x + ...``."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Any, coeffs: Iterable[Any] = ()):
        self.field = field
        cs = [field.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: Tuple[Any, ...] = tuple(cs)

    @classmethod
    def _raw(cls, field: Any, coeffs: List[Any]) -> "Poly":
        """Build from already-coerced coefficients."""
        poly = cls.__new__(cls)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        poly.field = field
        poly.coeffs = tuple(coeffs)
        return poly

    # Constructors

    @classmethod
    def zero(cls, field: Any = QQ) -> "Poly":
        return cls._raw(field, [])

    @classmethod
    def constant(cls, field: Any, value: Any) -> "Poly":
        return cls(field, [value])

    @classmethod
    def x(cls, field: Any = QQ) -> "Poly":
        return cls._raw(field, [field.zero, field.one])

    @classmethod
    def monomial(cls, field: Any, degree: int, value: Any = None) -> "Poly":
        value = field.one if value is None else field.coerce(value)
        return cls._raw(field, [field.zero] * degree + [value])

    @classmethod
    def from_roots(cls, field: Any, roots: Sequence[Any]) -> "Poly":
        """∏(x − r) as a balanced product tree."""
        layer = [cls._raw(field, [-field.coerce(r), field.one]) for r in roots]
        if not layer:
            return cls.constant(field, field.one)
        while len(layer) > 1:
            nxt = [layer[i] * layer[i + 1] for i in range(0, len(layer) - 1, 2)]
            if len(layer) % 2:
                nxt.append(layer[-1])
            layer = nxt
        return layer[0]

    # Basic queries

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Any:
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def coeff(self, i: int) -> Any:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    # Arithmetic

    def _coerce_other(self, other: Any) -> "Poly":
        if isinstance(other, Poly):
            if other.field != self.field:
                raise FieldMismatchError(
                    f"Polynomial fields differ: {self.field.tag} vs {other.field.tag}",
                    {"left": self.field.tag, "right": other.field.tag},
                )
            return other
        return Poly(self.field, [other])

    def __add__(self, other: Any) -> "Poly":
        other = self._coerce_other(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        res = list(a)
        for i, c in enumerate(b):
            res[i] = res[i] + c
        return Poly._raw(self.field, res)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.field, [-c for c in self.coeffs])

    def __sub__(self, other: Any) -> "Poly":
        return self + (-self._coerce_other(other))

    def __rsub__(self, other: Any) -> "Poly":
        return self._coerce_other(other) - self

    def __mul__(self, other: Any) -> "Poly":
        if not isinstance(other, Poly):
            c = self.field.coerce(other)
            return Poly._raw(self.field, [a * c for a in self.coeffs])
        other = self._coerce_other(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(self.field)
        res = [self.field.zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                res[i + j] = res[i + j] + ai * bj
        return Poly._raw(self.field, res)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise PreconditionError("Negative polynomial power", {"exponent": n})
        result = Poly.constant(self.field, self.field.one)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        other = self._coerce_other(other)
        if other.is_zero:
            raise SingularError("Polynomial division by zero")
        rem = list(self.coeffs)
        dv = other.coeffs
        n = len(dv) - 1
        inv = self.field.one / dv[-1]
        if len(rem) - 1 < n:
            return Poly.zero(self.field), self
        quo = [self.field.zero] * (len(rem) - n)
        for k in range(len(rem) - 1 - n, -1, -1):
            c = rem[k + n] * inv
            quo[k] = c
            if c:
                for j in range(n + 1):
                    rem[k + j] = rem[k + j] - c * dv[j]
        return Poly._raw(self.field, quo), Poly._raw(self.field, rem[:n])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        inv = self.field.one / self.coeffs[-1]
        return Poly._raw(self.field, [c * inv for c in self.coeffs])

    def derivative(self) -> "Poly":
        return Poly._raw(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def compose(self, inner: "Poly") -> "Poly":
        """self ∘ inner, by Horner's rule over polynomials."""
        inner = self._coerce_other(inner)
        if self.is_zero:
            return self
        result = Poly._raw(self.field, [self.coeffs[-1]])
        for c in reversed(self.coeffs[:-1]):
            result = result * inner + Poly._raw(self.field, [c])
        return result

    def eval(self, a: Any) -> Any:
        """Horner evaluation; ``a`` may live in an extension of the field."""
        if self.is_zero:
            return self.field.zero
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * a + c
        return acc

    __call__ = eval

    def map_coeffs(self, field: Any) -> "Poly":
        """Reinterpret the coefficients in another field (ℚ → ℚ(ζ), ℚ → 𝔽ₚ, ...)."""
        return Poly(field, self.coeffs)

    # Euclidean algorithms

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd (zero if both are zero)."""
        a, b = self, self._coerce_other(other)
        while not b.is_zero:
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other: "Poly") -> Tuple["Poly", "Poly", "Poly"]:
        """Return (g, s, t) with s·self + t·other = g, g monic."""
        other = self._coerce_other(other)
        one = Poly.constant(self.field, self.field.one)
        zero = Poly.zero(self.field)
        r0, r1, s0, s1, t0, t1 = self, other, one, zero, zero, one
        while not r1.is_zero:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero:
            return r0, s0, t0
        inv = self.field.one / r0.lc
        return r0 * inv, s0 * inv, t0 * inv

    # Equality and display

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    def __repr__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(terms)

    def to_json(self) -> List[Any]:
        return [self.field.encode(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, field: Any, raw: Any, location: str = "poly") -> "Poly":
        if not isinstance(raw, list):
            raise ParseError(f"Expected coefficient list at {location}", {"location": location})
        return cls(field, [field.decode(c, f"{location}[{i}]") for i, c in enumerate(raw)])


# sympy bridges for ℚ

def _to_dup(f: Poly) -> list:
    return [SQQ(c.numerator, c.denominator) for c in reversed(f.coeffs)]


def _from_sympy_qq(value: Any) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _is_rational(f: Poly) -> bool:
    return isinstance(f.field, RationalField)


# Module-level operations

def compose(outer: Poly, inner: Poly) -> Poly:
    """outer ∘ inner.

    Raises:
        FieldMismatchError: If the coefficient fields differ
    """
    return outer.compose(inner)


def sqrt_approx(m: Poly) -> Tuple[Poly, Poly]:
    """Square-root approximation of a monic even-degree polynomial.

    Returns the unique (H, L) with H monic of degree d = deg(M)/2,
    deg L ≤ d − 1 and M = H² − L. The coefficients of H are solved from the
    top down: matching the x^(2d−k) coefficient fixes h_(d−k).

    Args:
        m: Monic polynomial of even degree ≥ 2 over a characteristic-0 field

    Returns:
        (H, L)

    Raises:
        PreconditionError: If M is not monic, has odd degree, or the field has positive characteristic
    """
    field = m.field
    if field.characteristic != 0:
        raise PreconditionError(
            "sqrt_approx needs a characteristic-0 field",
            {"field": field.tag},
        )
    if m.is_zero or m.degree < 2 or m.degree % 2:
        raise PreconditionError("sqrt_approx needs even degree >= 2", {"degree": m.degree})
    if not m.is_monic():
        raise PreconditionError("sqrt_approx needs a monic polynomial", {"lc": str(m.lc)})

    d = m.degree // 2
    h = [field.zero] * (d + 1)
    h[d] = field.one
    for k in range(1, d + 1):
        target = 2 * d - k
        acc = field.zero
        for i in range(d - k + 1, d):
            j = target - i
            if d - k < j < d:
                acc = acc + h[i] * h[j]
        h[d - k] = (m.coeff(target) - acc) / 2
    big_h = Poly._raw(field, h)
    big_l = big_h * big_h - m
    if big_l.degree > d - 1:
        raise PreconditionError("sqrt_approx remainder degree check failed", {"degree": big_l.degree})
    return big_h, big_l


def resultant(f: Poly, g: Poly) -> Any:
    """Res(f, g) = lc(f)^deg g · ∏ g(roots of f)."""
    g = f._coerce_other(g)
    field = f.field
    if f.is_zero or g.is_zero:
        return field.zero
    if _is_rational(f):
        return _from_sympy_qq(dup_resultant(_to_dup(f), _to_dup(g), SQQ))

    # Res(a, b) = (−1)^(deg a · deg b) · lc(b)^(deg a − deg r) · Res(b, r), r = a mod b
    a, b = f, g
    acc = field.one
    while True:
        m, n = a.degree, b.degree
        if n == 0:
            return acc * b.lc ** m
        r = a % b
        if r.is_zero:
            return field.zero
        if (m * n) % 2:
            acc = -acc
        acc = acc * b.lc ** (m - r.degree)
        a, b = b, r


def discriminant(f: Poly) -> Any:
    """disc(f) = (−1)^(n(n−1)/2) · Res(f, f′) / lc(f).

    Raises:
        PreconditionError: If f is constant
    """
    if f.is_zero or f.degree < 1:
        raise PreconditionError("Discriminant of a constant polynomial", {"degree": f.degree})
    if _is_rational(f):
        return _from_sympy_qq(dup_discriminant(_to_dup(f), SQQ))
    n = f.degree
    res = resultant(f, f.derivative())
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return res * sign / f.lc


def is_squarefree(f: Poly) -> bool:
    """True iff gcd(f, f′) is constant."""
    if f.is_zero or f.degree < 1:
        raise PreconditionError("Square-free test needs degree >= 1", {"degree": f.degree})
    if _is_rational(f):
        return bool(dup_sqf_p(_to_dup(f), SQQ))
    return f.gcd(f.derivative()).degree == 0


def eval_poly(f: Poly, a: Any) -> Any:
    """Exact Horner evaluation."""
    return f.eval(a)
