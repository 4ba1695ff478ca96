"""Shared fixtures: small finite-field curves, forged family curves and sympy bridges."""

from fractions import Fraction
from random import Random

import pytest
import sympy

from src.curves import forge_curve
from src.fields import QQ
from src.jacobian import fp_curve
from src.poly import Poly

X = sympy.Symbol("x")


def to_sympy(f: Poly) -> sympy.Expr:
    """Rational Poly as a sympy expression in x."""
    return sum(sympy.Rational(c.numerator, c.denominator) * X ** i for i, c in enumerate(f.coeffs))


def qpoly(*coeffs) -> Poly:
    """Rational polynomial from low-to-high coefficients."""
    return Poly(QQ, [Fraction(c) for c in coeffs])


def random_qpoly(rng: Random, degree: int, height: int = 20, monic: bool = False) -> Poly:
    coeffs = [Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(degree)]
    top = Fraction(1) if monic else Fraction(rng.choice([-1, 1]) * rng.randint(1, height), rng.randint(1, height))
    return Poly(QQ, coeffs + [top])


@pytest.fixture
def rng():
    return Random(20240611)


@pytest.fixture(scope="session")
def quintic_f7():
    """y² = x⁵ + 1 over F_7."""
    return fp_curve([1, 0, 0, 0, 0, 1], 7)


@pytest.fixture(scope="session")
def genus2_f5():
    """y² = x⁵ + x + 1 over F_5; f′ = 1, so f is square-free."""
    return fp_curve([1, 1, 0, 0, 0, 1], 5)


@pytest.fixture(scope="session")
def forged():
    """Memoized forge_curve(family, d, seed)."""
    cache = {}

    def _forge(family: str, d: int, seed: int = 1):
        key = (family, d, seed)
        if key not in cache:
            cache[key] = forge_curve(family, d, seed)
        return cache[key]

    return _forge
