from fractions import Fraction

import pytest
import sympy

from src.base import FieldMismatchError, ParseError, PreconditionError, SingularError
from src.fields import QQ, FpElem, parse_rational, prime_field, reduce_rational
from src.poly import Poly, compose, discriminant, eval_poly, is_squarefree, resultant, sqrt_approx
from tests.conftest import X, qpoly, random_qpoly, to_sympy


class TestArithmetic:
    def test_strips_trailing_zeros(self):
        f = qpoly(1, 2, 0, 0)
        assert f.degree == 1
        assert f.coeffs == (Fraction(1), Fraction(2))

    def test_zero_polynomial(self):
        zero = Poly.zero(QQ)
        assert zero.is_zero
        assert zero.degree < 0
        assert zero + qpoly(3) == qpoly(3)

    def test_product_matches_sympy(self, rng):
        for _ in range(20):
            f = random_qpoly(rng, rng.randint(0, 6))
            g = random_qpoly(rng, rng.randint(0, 6))
            assert sympy.expand(to_sympy(f * g) - to_sympy(f) * to_sympy(g)) == 0

    def test_divmod(self, rng):
        for _ in range(20):
            f = random_qpoly(rng, rng.randint(0, 8))
            g = random_qpoly(rng, rng.randint(1, 4))
            q, r = divmod(f, g)
            assert q * g + r == f
            assert r.degree < g.degree

    def test_division_by_zero(self):
        with pytest.raises(SingularError):
            divmod(qpoly(1, 1), Poly.zero(QQ))

    def test_from_roots(self):
        assert Poly.from_roots(QQ, [1, -1]) == qpoly(-1, 0, 1)
        assert Poly.from_roots(QQ, []) == qpoly(1)

    def test_compose_and_eval(self, rng):
        f = random_qpoly(rng, 4)
        g = random_qpoly(rng, 3)
        fg = compose(f, g)
        assert fg.degree == 12
        for a in (Fraction(0), Fraction(3, 7), Fraction(-5, 2)):
            assert fg(a) == f(g(a))

    def test_eval_is_a_ring_homomorphism(self, rng):
        assert eval_poly(qpoly(1, 0, 1), 2) == 5
        assert eval_poly(Poly.zero(QQ), Fraction(7, 3)) == 0
        assert eval_poly(qpoly(0, 1, 0, 1), Fraction(1, 2)) == Fraction(5, 8)
        f = random_qpoly(rng, 5)
        g = random_qpoly(rng, 4)
        a = Fraction(-2, 9)
        assert eval_poly(f * g, a) == eval_poly(f, a) * eval_poly(g, a)

    def test_gcd_and_xgcd(self):
        f = Poly.from_roots(QQ, [1, 2, 3])
        g = Poly.from_roots(QQ, [2, 3, 5])
        assert f.gcd(g) == Poly.from_roots(QQ, [2, 3])
        h, s, t = f.xgcd(g)
        assert h == Poly.from_roots(QQ, [2, 3])
        assert s * f + t * g == h

    def test_field_mismatch(self):
        f7 = Poly(prime_field(7), [1, 1])
        with pytest.raises(FieldMismatchError):
            qpoly(1, 1) + f7

    def test_prime_field_polynomials(self):
        field = prime_field(7)
        f = Poly(field, [1, 0, 1])
        assert f(FpElem(3, 7)) == FpElem(3, 7)
        assert Poly(field, [7, 14]).is_zero


class TestSqrtApprox:
    @pytest.mark.parametrize("cases", [100, pytest.param(1000, marks=pytest.mark.slow)])
    def test_random_monic_even_degree(self, rng, cases):
        for _ in range(cases):
            degree = 2 * rng.randint(1, 20)
            m = random_qpoly(rng, degree, height=10 ** 6, monic=True)
            h, ell = sqrt_approx(m)
            assert h * h - ell == m
            assert h.is_monic() and h.degree == degree // 2
            assert ell.degree < h.degree

    def test_composition_compatibility(self, rng):
        for _ in range(100):
            m = random_qpoly(rng, 2 * rng.randint(1, 4), monic=True)
            g = random_qpoly(rng, rng.randint(1, 3), monic=True)
            h, ell = sqrt_approx(m)
            assert sqrt_approx(m.compose(g)) == (h.compose(g), ell.compose(g))

    def test_perfect_square(self):
        h = qpoly(3, -2, 1)
        assert sqrt_approx(h * h) == (h, Poly.zero(QQ))

    @pytest.mark.parametrize("m", [qpoly(1, 1, 1, 1), qpoly(1, 0, 2), qpoly(5)])
    def test_preconditions(self, m):
        with pytest.raises(PreconditionError):
            sqrt_approx(m)

    def test_needs_characteristic_zero(self):
        with pytest.raises(PreconditionError):
            sqrt_approx(Poly(prime_field(7), [1, 0, 1]))


class TestResultants:
    def test_resultant_matches_sympy(self, rng):
        for _ in range(15):
            f = random_qpoly(rng, rng.randint(1, 6))
            g = random_qpoly(rng, rng.randint(1, 6))
            expected = sympy.resultant(to_sympy(f), to_sympy(g), X)
            assert resultant(f, g) == Fraction(int(sympy.numer(expected)), int(sympy.denom(expected)))

    def test_discriminant_matches_sympy(self, rng):
        for _ in range(15):
            f = random_qpoly(rng, rng.randint(2, 7))
            expected = sympy.discriminant(to_sympy(f), X)
            assert discriminant(f) == Fraction(int(sympy.numer(expected)), int(sympy.denom(expected)))

    def test_quintic_discriminant(self):
        assert discriminant(qpoly(1, 0, 0, 0, 0, 1)) == 3125

    def test_prime_field_resultant(self):
        field = prime_field(11)
        f = Poly(field, [1, 0, 1])
        g = Poly(field, [2, 1])
        # Res(x² + 1, x + 2) = (−2)² + 1
        assert resultant(f, g) == FpElem(5, 11)

    def test_constant_discriminant(self):
        with pytest.raises(PreconditionError):
            discriminant(qpoly(4))

    def test_squarefree(self):
        assert is_squarefree(Poly.from_roots(QQ, [1, 2, 3]))
        assert not is_squarefree(Poly.from_roots(QQ, [1, 1, 3]))
        field = prime_field(5)
        assert not is_squarefree(Poly(field, [1, 0, 0, 0, 0, 1]))


class TestRationalParsing:
    def test_parse(self):
        assert parse_rational("3/4") == Fraction(3, 4)
        assert parse_rational("-7") == Fraction(-7)
        assert parse_rational(5) == Fraction(5)

    @pytest.mark.parametrize("raw", ["x/2", "1/0", 1.5, True, None])
    def test_parse_errors(self, raw):
        with pytest.raises(ParseError):
            parse_rational(raw, "f[0]")

    def test_reduce_rational(self):
        assert reduce_rational(Fraction(1, 2), 7) == 4
        with pytest.raises(SingularError):
            reduce_rational(Fraction(1, 14), 7)

    def test_json_round_trip(self):
        f = qpoly(Fraction(1, 3), 0, -2)
        assert Poly.from_json(QQ, f.to_json()) == f
        with pytest.raises(ParseError):
            Poly.from_json(QQ, "not a list")
