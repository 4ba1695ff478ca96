import pytest

from src.base import BudgetExceededError, PreconditionError
from src.jacobian import fp_curve, jac_add, jac_scalar_mul, reduce_class, reduce_curve, select_good_primes
from src.sieve import (
    combine,
    estimate_operations,
    expected_survivors,
    relation_sieve,
    sieve_curve,
)


@pytest.fixture(scope="module")
def large_curve():
    """y² = x⁵ + x + 1 over F_1009."""
    return fp_curve([1, 1, 0, 0, 0, 1], 1009)


@pytest.fixture(scope="module")
def classes(large_curve):
    """Two classes of order > 8 on the curve above."""
    found = []
    for x in range(2, 1009):
        divisor = large_curve.lift_x(x)
        if divisor is not None and not any(jac_scalar_mul(k, divisor).is_identity for k in range(1, 9)):
            found.append(divisor)
        if len(found) == 2:
            return found
    raise AssertionError("curve has too few points")


class TestEstimates:
    def test_operation_count(self):
        # 18·10 + 153·10·20 + 816·10·400
        assert estimate_operations(18, 10, 3) == 3294780

    def test_support_one(self):
        assert estimate_operations(5, 4, 1) == 20

    def test_expected_survivors(self):
        assert expected_survivors([[1, 1, 1, 0]], 2, 3) == [(1, 1, 1, 0), (2, 2, 2, 0)]
        assert expected_survivors([[1, 1, 1, 0]], 2, 2) == []
        assert expected_survivors([[-1, 2]], 4, 2) == [(1, -2), (2, -4)]
        assert expected_survivors([], 5, 3) == []


class TestRelationSieve:
    def test_duplicate_class_is_found(self, large_curve, classes):
        D, _ = classes
        report = relation_sieve(["a", "b"], {large_curve.p: [D, D]}, bound=2, support=2)
        assert [1, -1] in report.found_relations
        assert [1, -1] in report.unexpected
        assert report.verdict == "FAIL"

    def test_claimed_duplicate_passes(self, large_curve, classes):
        D, _ = classes
        report = relation_sieve(["a", "b"], {large_curve.p: [D, D]}, bound=2, support=2, claimed=[[1, -1]])
        assert report.found_relations == [[1, -1], [2, -2]]
        assert report.unexpected == []
        assert report.missing == []
        assert report.verdict == "PASS"

    def test_missing_claim_fails(self, large_curve, classes):
        D, E = classes
        report = relation_sieve(["a", "b"], {large_curve.p: [D, E]}, bound=1, support=2, claimed=[[1, -1]])
        if combine([1, -1], [D, E]).is_identity:
            pytest.skip("classes coincide")
        assert report.missing == [[1, -1]]
        assert report.verdict == "FAIL"

    def test_monotone_in_bounds(self, large_curve, classes):
        D, E = classes
        reduced = {large_curve.p: [D, D, E]}
        small = relation_sieve(["a", "b", "c"], reduced, bound=1, support=2).found_relations
        wider = relation_sieve(["a", "b", "c"], reduced, bound=2, support=2).found_relations
        widest = relation_sieve(["a", "b", "c"], reduced, bound=2, support=3).found_relations
        assert all(v in wider for v in small)
        assert all(v in widest for v in wider)

    def test_torsion_leading_term_is_extended(self, quintic_f7):
        # (6, 0) is a Weierstrass point, so T has order 2
        T = quintic_f7.lift_x(6)
        D = quintic_f7.lift_x(0)
        assert jac_scalar_mul(2, T).is_identity
        report = relation_sieve(["t", "a", "b"], {7: [T, D, D]}, bound=2, support=3)
        assert [2, 0, 0] in report.found_relations
        assert [0, 1, -1] in report.found_relations
        assert [2, 1, -1] in report.found_relations
        assert [2, 2, -2] in report.found_relations
        for vec in report.found_relations:
            assert combine(vec, [T, D, D]).is_identity

    def test_survivors_vanish_at_every_prime(self, forged):
        curve = forged("theta1", 2)
        report = sieve_curve(curve, "eps", prime_count=2, bound=1, support=3)
        for vec in report.found_relations:
            assert sum(1 for c in vec if c) <= 3

    def test_budget(self, large_curve, classes):
        with pytest.raises(BudgetExceededError) as excinfo:
            relation_sieve(["a", "b"], {large_curve.p: classes}, bound=10, support=2, op_budget=10)
        assert excinfo.value.details["estimate"] == estimate_operations(2, 10, 2)

    @pytest.mark.parametrize("support", [0, 3])
    def test_support_range(self, large_curve, classes, support):
        with pytest.raises(PreconditionError):
            relation_sieve(["a", "b"], {large_curve.p: classes}, bound=2, support=support)

    def test_needs_a_prime(self):
        with pytest.raises(PreconditionError):
            relation_sieve(["a"], {}, bound=2, support=1)

    def test_scope_is_recorded(self, large_curve, classes):
        report = relation_sieve(["a", "b"], {large_curve.p: classes}, bound=2, support=2)
        assert "not a rank certificate" in report.scope
        assert report.group_operations > 0


class TestSieveCurve:
    def test_lambda2_r_classes(self, forged):
        curve = forged("lambda2", 3)
        report = sieve_curve(curve, "r", prime_count=3, bound=3, support=3)
        assert report.verdict == "PASS"
        assert report.found_relations == []
        assert len(report.primes) == 3
        assert report.classes[0] == "r(Q1,1)"

    def test_theta1_blocks(self, forged):
        curve = forged("theta1", 2)
        report = sieve_curve(curve, "eps", prime_count=3, bound=2, support=3)
        assert len(report.claimed_relations) == 4
        assert len(report.found_relations) == 8
        assert report.missing == []
        assert report.verdict == "PASS"

    def test_r_classes_need_origin(self, forged):
        with pytest.raises(PreconditionError):
            sieve_curve(forged("gamma1", 4), "r")

    def test_even_degree_model(self, forged):
        with pytest.raises(PreconditionError):
            sieve_curve(forged("theta-tilde", 2), "eps", prime_count=1)

    def test_injected_dependent_class(self, forged):
        curve = forged("lambda2", 3)
        reduced = {}
        for p in select_good_primes(curve, 3, kind="r"):
            fp = reduce_curve(curve, p)
            classes = [reduce_class(pt, fp, "r") for _, pt in curve.primary_points]
            reduced[p] = classes + [jac_add(classes[0], classes[1])]
        labels = [label for label, _ in curve.primary_points] + ["sum"]
        report = relation_sieve(labels, reduced, bound=2, support=3)
        n = len(labels)
        injected = [1, 1] + [0] * (n - 3) + [-1]
        assert injected in report.found_relations
        assert [2 * c for c in injected] in report.found_relations
        assert injected in report.unexpected
        assert report.verdict == "FAIL"


@pytest.mark.slow
@pytest.mark.parametrize("family, d, count", [("lambda2", 3, 12), ("lambda2", 4, 16), ("theta2", 3, 18)])
def test_full_size_r_sieve(forged, family, d, count):
    report = sieve_curve(forged(family, d), "r", prime_count=5, bound=10, support=3)
    assert len(report.classes) == count
    assert len(report.primes) == 5
    assert report.unexpected == []
    assert report.verdict == "PASS"
