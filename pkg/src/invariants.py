"""Binary forms, the GL₂ substitution action and Igusa–Clebsch invariants.

A binary form of degree n is stored as b₀..bₙ with F = Σ bᵢ xⁱ z^{n−i}.
I₂, I₄ and I₆ come from Clebsch transvectants of the sextic; I₁₀ is the
discriminant of the binary sextic. The scalar normalization is the common
computer-algebra one: x⁶ + 2x⁴ + x² + 1 gives (−272, 1060, −80792, −33856).
"""

from fractions import Fraction
from math import comb, factorial, gcd
from typing import Any, List, NamedTuple, Optional, Sequence, Tuple
import logging

from sympy import integer_nthroot
from sympy.core.intfunc import igcdex

from .base import IndeterminateError, PreconditionError, SingularError
from .fields import QQ, format_rational
from .models import IgusaDocument
from .poly import Poly, discriminant

logger = logging.getLogger(__name__)

OVER_CHOICES = ("rational", "algebraic")


class BinaryForm:
    """Homogeneous form Σ bᵢ xⁱ z^{n−i} over ℚ."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Sequence[Any]):
        if degree < 0 or len(coeffs) != degree + 1:
            raise PreconditionError(
                f"A degree-{degree} form needs {degree + 1} coefficients, got {len(coeffs)}",
                {"degree": degree, "count": len(coeffs)},
            )
        self.degree = degree
        self.coeffs: Tuple[Fraction, ...] = tuple(QQ.coerce(c) for c in coeffs)

    @classmethod
    def zero(cls, degree: int) -> "BinaryForm":
        return cls(degree, [0] * (degree + 1))

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if other.degree != self.degree:
            raise PreconditionError("Cannot add forms of different degree", {"left": self.degree, "right": other.degree})
        return BinaryForm(self.degree, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other: Any) -> "BinaryForm":
        if isinstance(other, BinaryForm):
            out = [Fraction(0)] * (self.degree + other.degree + 1)
            for i, a in enumerate(self.coeffs):
                if a:
                    for j, b in enumerate(other.coeffs):
                        out[i + j] += a * b
            return BinaryForm(self.degree + other.degree, out)
        c = QQ.coerce(other)
        return BinaryForm(self.degree, [a * c for a in self.coeffs])

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "BinaryForm":
        result = BinaryForm(0, [1])
        for _ in range(k):
            result = result * self
        return result

    def dx(self) -> "BinaryForm":
        if self.degree == 0:
            return BinaryForm.zero(0)
        return BinaryForm(self.degree - 1, [i * self.coeffs[i] for i in range(1, self.degree + 1)])

    def dz(self) -> "BinaryForm":
        if self.degree == 0:
            return BinaryForm.zero(0)
        n = self.degree
        return BinaryForm(n - 1, [(n - i) * self.coeffs[i] for i in range(n)])

    def dehomogenize(self) -> Poly:
        """F(x, 1)."""
        return Poly(QQ, self.coeffs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BinaryForm) and other.degree == self.degree and other.coeffs == self.coeffs

    def __hash__(self) -> int:
        return hash((self.degree, self.coeffs))

    def __repr__(self) -> str:
        return f"BinaryForm({self.degree}, {[format_rational(c) for c in self.coeffs]})"


def homogenize(f: Poly, n: int) -> BinaryForm:
    """zⁿ·f(x/z) as a degree-n form.

    Raises:
        PreconditionError: If deg f > n
    """
    if f.degree > n:
        raise PreconditionError(f"deg f = {f.degree} exceeds form degree {n}", {"degree": f.degree, "n": n})
    return BinaryForm(n, [f.coeff(i) for i in range(n + 1)])


def gl2_act(m: Sequence[Sequence[Any]], form: BinaryForm) -> BinaryForm:
    """F(ax + bz, cx + dz) for m = [[a, b], [c, d]].

    Raises:
        SingularError: If det m = 0
    """
    (a, b), (c, d) = [[QQ.coerce(v) for v in row] for row in m]
    if a * d - b * c == 0:
        raise SingularError("GL2 action needs an invertible matrix", {"matrix": [[str(a), str(b)], [str(c), str(d)]]})
    n = form.degree
    # linear forms are stored z-coefficient first
    left = BinaryForm(1, [b, a])
    right = BinaryForm(1, [d, c])
    result = BinaryForm.zero(n)
    for i, coeff in enumerate(form.coeffs):
        if coeff:
            result = result + (left ** i) * (right ** (n - i)) * coeff
    return result


def _partial(form: BinaryForm, kx: int, kz: int) -> BinaryForm:
    for _ in range(kx):
        form = form.dx()
    for _ in range(kz):
        form = form.dz()
    return form


def transvectant(f: BinaryForm, g: BinaryForm, k: int) -> BinaryForm:
    """The k-th Clebsch transvectant (f, g)_k, a form of degree m + n − 2k."""
    m, n = f.degree, g.degree
    if k > min(m, n):
        raise PreconditionError("Transvectant order exceeds a form degree", {"k": k, "m": m, "n": n})
    scale = Fraction(factorial(m - k) * factorial(n - k), factorial(m) * factorial(n))
    total = BinaryForm.zero(m + n - 2 * k)
    for i in range(k + 1):
        term = _partial(f, k - i, i) * _partial(g, i, k - i)
        total = total + term * ((-1) ** i * comb(k, i))
    return total * scale


def _constant(form: BinaryForm) -> Fraction:
    return form.coeffs[0]


def binary_discriminant(form: BinaryForm) -> Fraction:
    """Discriminant of a binary form; a root at infinity is accounted for."""
    n = form.degree
    b = form.coeffs
    if b[n]:
        return Fraction(discriminant(form.dehomogenize()))
    if n < 2 or not b[n - 1]:
        # a double root at infinity
        return Fraction(0)
    return b[n - 1] ** 2 * Fraction(discriminant(Poly(QQ, b[:n])))


class IgusaTuple(NamedTuple):
    I2: Fraction
    I4: Fraction
    I6: Fraction
    I10: Fraction

    def to_document(self) -> IgusaDocument:
        return IgusaDocument(**{name: format_rational(value) for name, value in self._asdict().items()})

    @classmethod
    def from_values(cls, values: Sequence[Any]) -> "IgusaTuple":
        return cls(*(QQ.coerce(v) for v in values))


WEIGHTS = (1, 2, 3, 5)


def igusa_clebsch(form: BinaryForm) -> IgusaTuple:
    """Igusa–Clebsch invariants of a binary sextic.

    Raises:
        PreconditionError: If the form is not a sextic
    """
    if form.degree != 6:
        raise PreconditionError("Igusa-Clebsch invariants need a sextic", {"degree": form.degree})
    f = form
    i = transvectant(f, f, 4)
    delta = transvectant(i, i, 2)
    A = _constant(transvectant(f, f, 6))
    B = _constant(transvectant(i, i, 4))
    C = _constant(transvectant(i, delta, 4))

    I2 = -120 * A
    I4 = -720 * A ** 2 + 6750 * B
    I6 = 8640 * A ** 3 - 108000 * A * B + 202500 * C
    I10 = binary_discriminant(f)
    logger.debug(f"Igusa-Clebsch: A={A}, B={B}, C={C}")
    return IgusaTuple(I2, I4, I6, I10)


def curve_invariants(f: Poly) -> IgusaTuple:
    """Invariants of y² = f(x) for deg f ∈ {5, 6}.

    Raises:
        PreconditionError: If the curve is not of genus 2
    """
    if f.degree not in (5, 6):
        raise PreconditionError("Igusa-Clebsch invariants need a genus-2 curve", {"degree": f.degree})
    return igusa_clebsch(homogenize(f, 6))


def _is_rational_power(q: Fraction, k: int) -> bool:
    if q < 0:
        if k % 2 == 0:
            return False
        q = -q
    num_root, num_exact = integer_nthroot(q.numerator, k)
    den_root, den_exact = integer_nthroot(q.denominator, k)
    return bool(num_exact and den_exact)


def _bezout(weights: Sequence[int]) -> List[int]:
    """Integers c with Σ cᵢ·wᵢ = gcd(weights)."""
    coeffs = [1] + [0] * (len(weights) - 1)
    g = weights[0]
    for idx in range(1, len(weights)):
        s, t, g = igcdex(g, weights[idx])
        coeffs = [c * int(s) for c in coeffs[:idx]] + [int(t)] + coeffs[idx + 1:]
    return coeffs


def weighted_equivalent(t1: IgusaTuple, t2: IgusaTuple, over: str = "rational") -> bool:
    """True iff I'_{2i} = r^{2i}·I_{2i} for i ∈ {1, 2, 3, 5} and some r ≠ 0.

    By default r must be rational. With ``over="algebraic"`` r may be any
    nonzero algebraic number, so only λ = r² has to be consistent. Only ratio
    tests and exact integer roots are used, never root extraction over ℚ̄.

    Raises:
        IndeterminateError: Both tuples are all-zero
        PreconditionError: Unknown ``over``
    """
    if over not in OVER_CHOICES:
        raise PreconditionError(f"Invalid over: {over}", {"over": over, "choices": list(OVER_CHOICES)})
    if not any(t1) and not any(t2):
        raise IndeterminateError("Both invariant tuples are zero")
    support = [k for k, (a, b) in enumerate(zip(t1, t2)) if a or b]
    if any(not t1[k] or not t2[k] for k in support):
        return False

    weights = [WEIGHTS[k] for k in support]
    ratios = [t2[k] / t1[k] for k in support]
    for x in range(len(support)):
        for y in range(x + 1, len(support)):
            if ratios[x] ** weights[y] != ratios[y] ** weights[x]:
                return False
    if over == "algebraic":
        return True

    # λ = r² is fixed up to a gcd(weights)-th root of unity; r must be rational
    g = gcd(*weights)
    coeffs = _bezout(weights)
    lam_g = Fraction(1)
    for c, rho in zip(coeffs, ratios):
        lam_g *= rho ** c
    # lam_g = λ^g; need λ^g = r^(2g) with r rational
    return _is_rational_power(lam_g, 2 * g)
