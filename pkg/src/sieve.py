"""Bounded relation sieve over reductions of rational divisor classes.

A relation Σ aᵢ[Dᵢ] = 0 over ℚ survives reduction at every good prime, so
a vector that fails at one prime is not a relation. The sieve enumerates
every integer vector with at most ``support`` nonzero entries of absolute
value ≤ ``bound`` (first nonzero entry positive) and keeps those that vanish
at all primes.

The first prime carries the full enumeration, done meet-in-the-middle: the
last coefficient of each vector is found by looking −(partial sum) up in a
table of multiples instead of being looped over. Survivors are re-tested at
the remaining primes, then re-verified with plain scalar multiplication.
"""

from collections import defaultdict
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from .base import BudgetExceededError, PreconditionError
from .curves import CurveSpec, claimed_relations
from .jacobian import MumfordDivisor, jac_add, jac_neg, jac_scalar_mul, reduce_class, reduce_curve, select_good_primes
from .models import RelationReport

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


def estimate_operations(n: int, bound: int, support: int) -> int:
    """Number of vectors (up to sign) the enumeration visits."""
    return sum(comb(n, t) * bound * (2 * bound) ** (t - 1) for t in range(1, support + 1))


def scope_text(bound: int, support: int) -> str:
    return f"no relation with support <= {support} and coefficients bounded by {bound}; not a rank certificate"


def _normalize(vec: Sequence[int]) -> Vector:
    for c in vec:
        if c:
            return tuple(vec) if c > 0 else tuple(-x for x in vec)
    return tuple(vec)


def expected_survivors(claimed: Sequence[Sequence[int]], bound: int, support: int) -> List[Vector]:
    """Multiples of the claimed relations that fall inside the search box."""
    found = set()
    for rel in claimed:
        nonzero = [abs(c) for c in rel if c]
        if not nonzero or len(nonzero) > support:
            continue
        for k in range(1, bound // max(nonzero) + 1):
            found.add(_normalize([k * c for c in rel]))
    return sorted(found)


def combine(vec: Sequence[int], divisors: Sequence[MumfordDivisor]) -> MumfordDivisor:
    """Σ vec[i]·divisors[i] by independent scalar multiplications."""
    total = divisors[0].curve.identity()
    for c, div in zip(vec, divisors):
        if c:
            total = jac_add(total, jac_scalar_mul(c, div))
    return total


class _FirstPrimeSearch:
    """Full enumeration at one prime."""

    def __init__(self, divisors: Sequence[MumfordDivisor], bound: int, support: int):
        self.divisors = list(divisors)
        self.n = len(divisors)
        self.bound = bound
        self.support = support
        self.operations = 0
        self.found: List[Vector] = []
        # multiples[i][a] = a·D_i for 0 < |a| ≤ bound
        self.multiples: List[Dict[int, MumfordDivisor]] = []
        # index[i][key] = all c with c·D_i having that key
        self.index: List[Dict[tuple, List[int]]] = []

    def _tabulate(self) -> None:
        for div in self.divisors:
            table: Dict[int, MumfordDivisor] = {1: div}
            acc = div
            for a in range(2, self.bound + 1):
                acc = jac_add(acc, div)
                table[a] = acc
                self.operations += 1
            for a in range(1, self.bound + 1):
                table[-a] = jac_neg(table[a])
            lookup: Dict[tuple, List[int]] = defaultdict(list)
            for a, mult in table.items():
                lookup[mult.key].append(a)
            self.multiples.append(table)
            self.index.append(lookup)

    def _emit(self, coeffs: Dict[int, int]) -> None:
        vec = [0] * self.n
        for i, c in coeffs.items():
            vec[i] = c
        self.found.append(tuple(vec))

    def _extend(self, coeffs: Dict[int, int], last: int, partial: MumfordDivisor) -> None:
        # Close the vector with one more index looked up against −partial
        target = jac_neg(partial).key
        for k in range(last + 1, self.n):
            self.operations += 1
            for c in self.index[k].get(target, ()):
                self._emit({**coeffs, k: c})
        if len(coeffs) + 1 >= self.support:
            return
        for j in range(last + 1, self.n):
            for b in range(-self.bound, self.bound + 1):
                if b == 0:
                    continue
                nxt = jac_add(partial, self.multiples[j][b])
                self.operations += 1
                self._extend({**coeffs, j: b}, j, nxt)

    def run(self) -> List[Vector]:
        self._tabulate()
        for i in range(self.n):
            for a in range(1, self.bound + 1):
                mult = self.multiples[i][a]
                if mult.is_identity:
                    self._emit({i: a})
                # a torsion leading term still heads longer relations
                if self.support >= 2:
                    self._extend({i: a}, i, mult)
        return sorted(set(self.found))


def relation_sieve(
    labels: Sequence[str],
    reduced: Dict[int, Sequence[MumfordDivisor]],
    bound: int,
    support: int,
    op_budget: int = 10 ** 8,
    claimed: Optional[Sequence[Sequence[int]]] = None,
    kind: str = "r",
) -> RelationReport:
    """Search for small integer relations among classes reduced at several primes.

    Args:
        labels: One label per class
        reduced: prime → the classes reduced at that prime, in label order
        bound: Coefficient bound B
        support: Maximum number of nonzero coefficients s
        op_budget: Abort if the enumeration would visit more vectors than this
        claimed: Relations known to hold over ℚ
        kind: Class kind recorded in the report

    Raises:
        PreconditionError: Inconsistent inputs
        BudgetExceededError: Enumeration larger than op_budget
    """
    n = len(labels)
    primes = list(reduced)
    if not primes:
        raise PreconditionError("At least one prime is required")
    if any(len(reduced[p]) != n for p in primes):
        raise PreconditionError("Every prime needs one reduced class per label", {"classes": n})
    if not 1 <= support <= n:
        raise PreconditionError(f"support must lie in [1, {n}]", {"support": support, "classes": n})
    if bound < 1:
        raise PreconditionError("bound must be positive", {"bound": bound})

    estimate = estimate_operations(n, bound, support)
    if estimate > op_budget:
        raise BudgetExceededError(
            f"Sieve would visit {estimate} vectors, budget is {op_budget}",
            {"estimate": estimate, "op_budget": op_budget},
        )

    search = _FirstPrimeSearch(reduced[primes[0]], bound, support)
    survivors = search.run()
    operations = search.operations
    logger.info(f"Sieve p={primes[0]}: {len(survivors)} candidates from {estimate} vectors")

    for p in primes[1:]:
        kept = []
        for vec in survivors:
            operations += sum(1 for c in vec if c)
            if combine(vec, reduced[p]).is_identity:
                kept.append(vec)
        survivors = kept
        logger.info(f"Sieve p={p}: {len(survivors)} survivors")

    # independent recomputation at every prime
    survivors = [v for v in survivors if all(combine(v, reduced[p]).is_identity for p in primes)]

    claimed = [list(c) for c in (claimed or [])]
    expected = expected_survivors(claimed, bound, support)
    unexpected = [list(v) for v in survivors if v not in expected]
    missing = [list(v) for v in expected if v not in survivors]
    for vec in unexpected:
        logger.warning(f"Unexpected sieve survivor: {vec}")
    for vec in missing:
        logger.warning(f"Claimed relation not found: {vec}")

    return RelationReport(
        classes=list(labels),
        kind=kind,
        primes=primes,
        bound=bound,
        support=support,
        found_relations=[list(v) for v in survivors],
        claimed_relations=claimed,
        unexpected=unexpected,
        missing=missing,
        group_operations=operations,
        scope=scope_text(bound, support),
        verdict="PASS" if not unexpected and not missing else "FAIL",
    )


def sieve_curve(
    curve: CurveSpec,
    kind: str = "r",
    prime_count: int = 5,
    prime_min: int = 1000,
    prime_max: int = 10000,
    bound: int = 10,
    support: int = 3,
    op_budget: int = 10 ** 8,
) -> RelationReport:
    """Reduce the curve's primary classes at good primes and sieve them.

    Raises:
        PreconditionError: Even-degree model, or r-classes on a family without (0, 0)
        BadReductionError: Not enough good primes
        BudgetExceededError: Enumeration too large
    """
    claimed = claimed_relations(curve, kind)
    primes = select_good_primes(curve, prime_count, prime_min, prime_max, kind)
    primaries = curve.primary_points
    reduced: Dict[int, List[MumfordDivisor]] = {}
    for p in primes:
        fp = reduce_curve(curve, p)
        reduced[p] = [reduce_class(pt, fp, kind) for _, pt in primaries]
    labels = [f"{kind}({label})" for label, _ in primaries]
    logger.info(f"Sieving {len(labels)} {kind}-classes of {curve.family} d={curve.d} at {primes}")
    return relation_sieve(labels, reduced, bound, support, op_budget, claimed, kind)
