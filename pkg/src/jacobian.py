"""Divisor-class arithmetic on odd-degree hyperelliptic Jacobians over 𝔽ₚ.

Divisors are kept in Mumford form (u, v) with u monic, deg v < deg u ≤ g
and u | v² − f. Polynomials are sympy galoistools dense lists (highest
coefficient first, entries in [0, p)), stored as tuples so divisors hash
and compare cheaply inside the relation sieve.
"""

from dataclasses import dataclass
from typing import Any, Iterator, List, Optional, Sequence, Tuple, Union
import logging

from sympy import nextprime
from sympy.ntheory.residue_ntheory import sqrt_mod
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_add,
    gf_degree,
    gf_eval,
    gf_gcdex,
    gf_monic,
    gf_mul,
    gf_neg,
    gf_quo,
    gf_rem,
    gf_sqf_p,
    gf_sqr,
    gf_sub,
)

from .base import BadReductionError, CurveMismatchError, PreconditionError, SingularError
from .curves import INFINITY, CurveSpec
from .fields import QQ, prime_field, reduce_rational
from .poly import Poly

logger = logging.getLogger(__name__)

CLASS_KINDS = ("point", "eps", "r")

GfPoly = Tuple[int, ...]


def _tup(f: Sequence[Any]) -> GfPoly:
    return tuple(int(c) for c in f)


@dataclass(frozen=True)
class FpCurve:
    """y² = f(x) over 𝔽ₚ with deg f = 2g + 1 and f square-free."""

    p: int
    f: GfPoly

    @property
    def degree(self) -> int:
        return len(self.f) - 1

    @property
    def genus(self) -> int:
        return (self.degree - 1) // 2

    def identity(self) -> "MumfordDivisor":
        return MumfordDivisor(self, (1,), ())

    def eval_f(self, x: int) -> int:
        return int(gf_eval(list(self.f), x % self.p, self.p, ZZ))

    def point(self, x: int, y: int) -> "MumfordDivisor":
        """[P − ∞] for an affine point P = (x, y).

        Raises:
            PreconditionError: If P is not on the curve
        """
        x, y = x % self.p, y % self.p
        if (y * y - self.eval_f(x)) % self.p:
            raise PreconditionError(f"({x}, {y}) is not on the curve over F_{self.p}", {"x": x, "y": y})
        return MumfordDivisor(self, (1, (-x) % self.p), (y,) if y else ())

    def lift_x(self, x: int) -> Optional["MumfordDivisor"]:
        """[P − ∞] for some P with x-coordinate x, or None if f(x) is a non-square."""
        y = sqrt_mod(self.eval_f(x), self.p)
        return None if y is None else self.point(x, y)

    def affine_points(self) -> Iterator[Tuple[int, int]]:
        """Every affine point; only sensible for small p."""
        for x in range(self.p):
            fx = self.eval_f(x)
            for y in range(self.p):
                if (y * y - fx) % self.p == 0:
                    yield (x, y)


@dataclass(frozen=True)
class MumfordDivisor:
    """Reduced divisor class ⟨u, v⟩ on an FpCurve."""

    curve: FpCurve
    u: GfPoly
    v: GfPoly

    @property
    def key(self) -> Tuple[GfPoly, GfPoly]:
        return (self.u, self.v)

    @property
    def is_identity(self) -> bool:
        return self.u == (1,)

    @property
    def degree(self) -> int:
        return len(self.u) - 1

    @property
    def u_poly(self) -> Poly:
        return Poly(prime_field(self.curve.p), reversed(self.u))

    @property
    def v_poly(self) -> Poly:
        return Poly(prime_field(self.curve.p), reversed(self.v))

    def is_valid(self) -> bool:
        """u monic, deg v < deg u ≤ g and u | v² − f."""
        p = self.curve.p
        if not self.u or self.u[0] != 1 or len(self.v) >= len(self.u) or self.degree > self.curve.genus:
            return False
        rem = gf_rem(gf_sub(gf_sqr(list(self.v), p, ZZ), list(self.curve.f), p, ZZ), list(self.u), p, ZZ)
        return not rem

    def __add__(self, other: "MumfordDivisor") -> "MumfordDivisor":
        return jac_add(self, other)

    def __neg__(self) -> "MumfordDivisor":
        return jac_neg(self)

    def __sub__(self, other: "MumfordDivisor") -> "MumfordDivisor":
        return jac_add(self, jac_neg(other))

    def __rmul__(self, n: int) -> "MumfordDivisor":
        return jac_scalar_mul(n, self)

    def __repr__(self) -> str:
        return f"<u={list(self.u)}, v={list(self.v)} mod {self.curve.p}>"


def fp_curve(f: Union[Poly, Sequence[int]], p: int) -> FpCurve:
    """FpCurve from an integer polynomial (low-to-high coefficients, as in Poly).

    Raises:
        PreconditionError: Even degree
        BadReductionError: Leading coefficient vanishes or f is not square-free mod p
    """
    prime_field(p)
    if isinstance(f, Poly):
        coeffs = [reduce_rational(c, p) for c in f.coeffs]
        degree = f.degree
    else:
        coeffs = [int(c) % p for c in f]
        degree = len(coeffs) - 1
    if degree % 2 == 0:
        raise PreconditionError("Jacobian arithmetic needs an odd-degree model", {"degree": degree})
    if coeffs[-1] == 0:
        raise BadReductionError("leading coefficient divisible by p", p)
    gf = list(reversed(coeffs))
    if not gf_sqf_p(gf, p, ZZ):
        raise BadReductionError("f not squarefree mod p", p)
    return FpCurve(p, _tup(gf))


def reduce_curve(curve: CurveSpec, p: int) -> FpCurve:
    """Reduce a curve over ℚ modulo a good prime.

    Raises:
        PreconditionError: deg f even, or p not an odd prime
        BadReductionError: p divides a denominator of f or of a point coordinate,
            the leading coefficient, or disc(f)
    """
    if curve.f.degree % 2 == 0:
        raise PreconditionError(
            f"{curve.family} has an even-degree model; Jacobian arithmetic is not available",
            {"family": curve.family, "degree": curve.f.degree},
        )
    if curve.point_field != QQ:
        raise PreconditionError("Reduction needs a curve over Q", {"field": curve.point_field.tag})
    for c in curve.f.coeffs:
        if c.denominator % p == 0:
            raise BadReductionError("p divides a denominator of f", p)
    for pt in curve.points:
        if pt != INFINITY and any(c.denominator % p == 0 for c in pt):
            raise BadReductionError("p divides a point denominator", p)
    return fp_curve(curve.f, p)


def select_good_primes(
    curve: CurveSpec,
    count: int,
    prime_min: int = 1000,
    prime_max: int = 10000,
    kind: Optional[str] = None,
) -> List[int]:
    """The ``count`` smallest primes ≥ prime_min of good reduction for the curve.

    With ``kind`` set, primes where some primary point's class of that kind
    fails to reduce are skipped too.

    Raises:
        BadReductionError: If fewer than ``count`` good primes lie below prime_max
    """
    primes: List[int] = []
    q = nextprime(max(prime_min, 3) - 1)
    while len(primes) < count:
        if q > prime_max:
            raise BadReductionError(
                f"only {len(primes)} good primes in [{prime_min}, {prime_max}]", q,
            )
        try:
            reduced = reduce_curve(curve, q)
            if kind is not None:
                for _, point in curve.primary_points:
                    reduce_class(point, reduced, kind)
            primes.append(q)
        except BadReductionError as e:
            logger.warning(f"Skipping p={q}: {e.condition}")
        q = nextprime(q)
    logger.info(f"Good primes for {curve.family} d={curve.d}: {primes}")
    return primes


def _check_same(d1: MumfordDivisor, d2: MumfordDivisor) -> None:
    if d1.curve != d2.curve:
        raise CurveMismatchError(
            "Divisors live on different curves",
            {"left_p": d1.curve.p, "right_p": d2.curve.p},
        )


def _reduce(curve: FpCurve, u: list, v: list) -> MumfordDivisor:
    p, f, g = curve.p, list(curve.f), curve.genus
    while gf_degree(u) > g:
        u = gf_quo(gf_sub(f, gf_sqr(v, p, ZZ), p, ZZ), u, p, ZZ)
        v = gf_rem(gf_neg(v, p, ZZ), u, p, ZZ)
    _, u = gf_monic(u, p, ZZ)
    v = gf_rem(v, u, p, ZZ)
    return MumfordDivisor(curve, _tup(u), _tup(v))


def jac_add(d1: MumfordDivisor, d2: MumfordDivisor) -> MumfordDivisor:
    """Cantor composition followed by reduction.

    Raises:
        CurveMismatchError: If the divisors live on different curves
    """
    _check_same(d1, d2)
    if d1.is_identity:
        return d2
    if d2.is_identity:
        return d1
    curve = d1.curve
    p, f = curve.p, list(curve.f)
    u1, v1, u2, v2 = list(d1.u), list(d1.v), list(d2.u), list(d2.v)

    e1, e2, d0 = gf_gcdex(u1, u2, p, ZZ)
    c1, c2, d = gf_gcdex(d0, gf_add(v1, v2, p, ZZ), p, ZZ)
    s1, s2, s3 = gf_mul(c1, e1, p, ZZ), gf_mul(c1, e2, p, ZZ), c2

    u = gf_quo(gf_mul(u1, u2, p, ZZ), gf_sqr(d, p, ZZ), p, ZZ)
    num = gf_add(
        gf_add(gf_mul(s1, gf_mul(u1, v2, p, ZZ), p, ZZ), gf_mul(s2, gf_mul(u2, v1, p, ZZ), p, ZZ), p, ZZ),
        gf_mul(s3, gf_add(gf_mul(v1, v2, p, ZZ), f, p, ZZ), p, ZZ),
        p,
        ZZ,
    )
    v = gf_rem(gf_quo(num, d, p, ZZ), u, p, ZZ)
    return _reduce(curve, u, v)


def jac_neg(d: MumfordDivisor) -> MumfordDivisor:
    """⟨u, −v⟩."""
    return MumfordDivisor(d.curve, d.u, _tup(gf_neg(list(d.v), d.curve.p, ZZ)))


def jac_scalar_mul(n: int, d: MumfordDivisor) -> MumfordDivisor:
    """n·D by double-and-add; 0·D is the identity."""
    if n < 0:
        return jac_scalar_mul(-n, jac_neg(d))
    result = d.curve.identity()
    addend = d
    while n:
        if n & 1:
            result = jac_add(result, addend)
        n >>= 1
        if n:
            addend = jac_add(addend, addend)
    return result


def origin_class(curve: FpCurve) -> MumfordDivisor:
    """[D − ∞] for the Weierstrass point D = (0, 0).

    Raises:
        PreconditionError: If f(0) ≠ 0
    """
    return curve.point(0, 0)


def reduce_class(point: Tuple[Any, Any], curve: FpCurve, kind: str = "point") -> MumfordDivisor:
    """Reduce the class attached to a rational point.

    ``kind`` selects [P − ∞] ("point"), ε(P) = 2[P − ∞] ("eps") or
    𝔯(P) = [P − ∞] − [D − ∞] with D = (0, 0) ("r").

    Raises:
        BadReductionError: Non-p-integral coordinate, or P reduces onto D for r-classes
        PreconditionError: Unknown kind
    """
    if kind not in CLASS_KINDS:
        raise PreconditionError(f"Unknown class kind '{kind}'", {"kind": kind, "choices": list(CLASS_KINDS)})
    p = curve.p
    if point == INFINITY:
        base = curve.identity()
    else:
        try:
            x, y = (reduce_rational(c, p) for c in point)
        except SingularError:
            raise BadReductionError("non-integral coordinate", p)
        base = curve.point(x, y)

    if kind == "point":
        return base
    if kind == "eps":
        return jac_add(base, base)
    origin = origin_class(curve)
    if base == origin:
        raise BadReductionError("point reduces onto the base point (0, 0)", p)
    return jac_add(base, jac_neg(origin))
