from fractions import Fraction
from math import gcd

import pytest

from src.base import IndeterminateError, PreconditionError, SingularError
from src.invariants import (
    WEIGHTS,
    _bezout,
    BinaryForm,
    IgusaTuple,
    binary_discriminant,
    curve_invariants,
    gl2_act,
    homogenize,
    igusa_clebsch,
    transvectant,
    weighted_equivalent,
)
from tests.conftest import qpoly

# y² = x⁶ + 2x⁴ + x² + c for c = 1, 2
CURVE_ONE = qpoly(1, 0, 1, 0, 2, 0, 1)
CURVE_TWO = qpoly(2, 0, 1, 0, 2, 0, 1)
INVARIANTS_ONE = IgusaTuple.from_values([-272, 1060, -80792, -33856])
INVARIANTS_TWO = IgusaTuple.from_values([-512, 5296, -799232, -1280000])


def _scaled(t: IgusaTuple, lam) -> IgusaTuple:
    return IgusaTuple.from_values([Fraction(lam) ** w * v for w, v in zip(WEIGHTS, t)])


class TestBinaryForms:
    def test_homogenize(self):
        assert homogenize(qpoly(1, 0, 0, 0, 0, 1), 6).coeffs == tuple(map(Fraction, [1, 0, 0, 0, 0, 1, 0]))
        assert homogenize(qpoly(3), 2) == BinaryForm(2, [3, 0, 0])
        with pytest.raises(PreconditionError):
            homogenize(qpoly(1, 0, 0, 1), 2)

    def test_swap(self):
        # x²z ↦ z²x
        swapped = gl2_act([[0, 1], [1, 0]], BinaryForm(3, [0, 0, 1, 0]))
        assert swapped == BinaryForm(3, [0, 1, 0, 0])

    def test_translation(self):
        # (x + z)² = x² + 2xz + z²
        assert gl2_act([[1, 1], [0, 1]], BinaryForm(2, [0, 0, 1])) == BinaryForm(2, [1, 2, 1])

    def test_singular_matrix(self):
        with pytest.raises(SingularError):
            gl2_act([[1, 2], [2, 4]], BinaryForm(2, [1, 0, 1]))

    def test_coefficient_count(self):
        with pytest.raises(PreconditionError):
            BinaryForm(3, [1, 2])

    def test_transvectant_degree(self):
        f = homogenize(CURVE_ONE, 6)
        assert transvectant(f, f, 4).degree == 4
        assert transvectant(f, f, 6).degree == 0
        with pytest.raises(PreconditionError):
            transvectant(f, BinaryForm(2, [1, 0, 1]), 3)

    def test_discriminant_root_at_infinity(self):
        # b₆ = 0 contributes b₅²
        form = homogenize(qpoly(1, 1, 0, 0, 0, 2), 6)
        assert binary_discriminant(form) == 4 * binary_discriminant(homogenize(qpoly(1, 1, 0, 0, 0, 2), 5))

    def test_double_root_at_infinity(self):
        assert binary_discriminant(homogenize(qpoly(1, 0, 0, 0, 1), 6)) == 0


class TestIgusaClebsch:
    def test_reference_values(self):
        assert curve_invariants(CURVE_ONE) == INVARIANTS_ONE
        assert curve_invariants(CURVE_TWO) == INVARIANTS_TWO

    def test_reference_pair_is_not_equivalent(self):
        assert not weighted_equivalent(INVARIANTS_ONE, INVARIANTS_TWO)
        assert not weighted_equivalent(INVARIANTS_ONE, INVARIANTS_TWO, over="rational")

    def test_repeated_root(self):
        f = qpoly(1, -1) * qpoly(1, -1) * qpoly(1, 0, 0, 0, 1)
        assert curve_invariants(f).I10 == 0

    @pytest.mark.parametrize("degree", [3, 4, 7, 8])
    def test_genus_two_only(self, degree):
        with pytest.raises(PreconditionError):
            curve_invariants(qpoly(*([1] + [0] * (degree - 1) + [1])))

    def test_needs_sextic(self):
        with pytest.raises(PreconditionError):
            igusa_clebsch(BinaryForm(5, [1, 0, 0, 0, 0, 1]))

    @pytest.mark.parametrize(
        "matrix",
        [
            [[2, 0], [0, 1]],
            [[1, 3], [0, 1]],
            [[0, 1], [1, 0]],
            [[1, Fraction(1, 2)], [-1, 3]],
        ],
    )
    def test_gl2_covariance(self, matrix):
        form = homogenize(CURVE_ONE, 6)
        (a, b), (c, d) = matrix
        det = Fraction(a) * d - Fraction(b) * c
        moved = igusa_clebsch(gl2_act(matrix, form))
        assert moved == _scaled(INVARIANTS_ONE, det ** 6)
        assert weighted_equivalent(INVARIANTS_ONE, moved)

    def test_quintic_matches_its_sextic_image(self):
        quintic = qpoly(1, 1, 0, 0, 0, 1)
        form = homogenize(quintic, 6)
        # z ↦ x + z moves the root at infinity to a finite point
        moved = gl2_act([[1, 0], [1, 1]], form)
        assert moved.coeffs[6] != 0
        assert igusa_clebsch(moved) == curve_invariants(quintic)

    def test_forged_curve(self, forged):
        curve = forged("theta-tilde", 2)
        values = curve_invariants(curve.f)
        assert values.I10 != 0
        assert weighted_equivalent(values, values, over="rational")


class TestWeightedEquivalence:
    def test_rational_scaling(self):
        assert weighted_equivalent(INVARIANTS_ONE, _scaled(INVARIANTS_ONE, 4), over="rational")
        assert weighted_equivalent(INVARIANTS_ONE, _scaled(INVARIANTS_ONE, Fraction(1, 9)), over="rational")

    def test_irrational_scaling(self):
        # λ = r² = 2 needs r = √2
        scaled = _scaled(INVARIANTS_ONE, 2)
        assert weighted_equivalent(INVARIANTS_ONE, scaled) is False
        assert weighted_equivalent(INVARIANTS_ONE, scaled, over="rational") is False
        assert weighted_equivalent(INVARIANTS_ONE, scaled, over="algebraic") is True

    def test_negative_square(self):
        # λ = −1 needs r = i
        flipped = _scaled(INVARIANTS_ONE, -1)
        assert not weighted_equivalent(INVARIANTS_ONE, flipped)
        assert weighted_equivalent(INVARIANTS_ONE, flipped, over="algebraic")

    @pytest.mark.parametrize("weights", [list(WEIGHTS), [2, 3], [3, 5], [2, 4], [4, 6, 10]])
    def test_bezout_coefficients(self, weights):
        coeffs = _bezout(weights)
        assert len(coeffs) == len(weights)
        assert sum(c * w for c, w in zip(coeffs, weights)) == gcd(*weights)

    def test_inconsistent_ratios(self):
        broken = INVARIANTS_ONE._replace(I4=INVARIANTS_ONE.I4 * 2)
        assert not weighted_equivalent(INVARIANTS_ONE, broken)

    def test_zero_pattern(self):
        a = IgusaTuple.from_values([1, 0, 0, 1])
        b = IgusaTuple.from_values([1, 1, 0, 1])
        assert not weighted_equivalent(a, b)
        assert weighted_equivalent(a, IgusaTuple.from_values([4, 0, 0, 1024]), over="rational")

    def test_all_zero(self):
        zero = IgusaTuple.from_values([0, 0, 0, 0])
        with pytest.raises(IndeterminateError):
            weighted_equivalent(zero, zero)
        assert not weighted_equivalent(zero, INVARIANTS_ONE)

    def test_unknown_mode(self):
        with pytest.raises(PreconditionError):
            weighted_equivalent(INVARIANTS_ONE, INVARIANTS_ONE, over="p-adic")

    def test_document(self):
        doc = INVARIANTS_ONE.to_document()
        assert doc.I2 == "-272/1"
        assert doc.I10 == "-33856/1"
