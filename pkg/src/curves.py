"""Hyperelliptic curve families built from composite witnesses.

Every family has the shape y² = twist(x)·ℓ(inner(x)) where (h, ℓ) is the
square-root approximation of the witness's outer polynomial m, so that
h(inner(x))² − ℓ(inner(x)) = m(inner(x)) splits over the witness roots.
That identity hands each family an explicit point inventory.

Families:
- gamma1, gamma2, gamma-tilde, theta1, theta2, theta-tilde (B witness)
- lambda1, lambda2, lambda-tilde (Z witness)
- kummer (over ℚ(ζₚ)), baseline (free tuple)
"""

from dataclasses import dataclass
from random import Random
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple
import logging

from sympy import isprime

from .algebra import cyclotomic_field
from .base import (
    DegeneracyError,
    PreconditionError,
    RetriesExhaustedError,
    SingularError,
    UnsupportedFamilyError,
)
from .composite import CompositeWitness, sample_witness
from .fields import QQ
from .models import ExpectedDocument, VerificationReport, WitnessReport
from .poly import Poly, is_squarefree, sqrt_approx

logger = logging.getLogger(__name__)

FAMILIES = (
    "gamma1", "gamma2", "gamma-tilde",
    "theta1", "theta2", "theta-tilde",
    "lambda1", "lambda2", "lambda-tilde",
    "kummer", "baseline",
)

WITNESS_KIND = {
    "gamma1": "B", "gamma2": "B", "gamma-tilde": "B",
    "theta1": "B", "theta2": "B", "theta-tilde": "B",
    "lambda1": "Z", "lambda2": "Z", "lambda-tilde": "Z",
    "kummer": "kummer", "baseline": "baseline",
}

# Smallest d with positive genus
MIN_D = {
    "gamma1": 4, "gamma2": 3, "gamma-tilde": 3,
    "theta1": 2, "theta2": 2, "theta-tilde": 2,
    "lambda1": 3, "lambda2": 2, "lambda-tilde": 2,
    "baseline": 4,
}

TWISTED = ("gamma2", "theta2", "lambda2")
FUNCTION_WITNESS = (
    "gamma1", "gamma-tilde", "theta1", "theta-tilde",
    "lambda1", "lambda-tilde", "kummer", "baseline",
)

INFINITY = ("inf", "+")


class ExpectedCounts(NamedTuple):
    genus: int
    N: int
    R: int


@dataclass(frozen=True)
class CurveSpec:
    """y² = f(x) with its point inventory.

    ``points`` lists each positive-branch point followed by its hyperelliptic
    conjugate, then (0, 0) for the twisted families, then the point at
    infinity when deg f is odd. ``labels`` names the positive-branch points.
    """

    family: str
    d: int
    f: Poly
    genus: int
    points: Tuple[Tuple[Any, Any], ...]
    labels: Tuple[str, ...]
    h: Poly
    l: Poly
    inner: Poly
    witness: CompositeWitness
    expected: Optional[ExpectedCounts] = None

    @property
    def point_field(self) -> Any:
        return self.witness.root_field

    @property
    def primary_points(self) -> List[Tuple[str, Tuple[Any, Any]]]:
        return [(label, self.points[2 * i]) for i, label in enumerate(self.labels)]

    @property
    def has_origin(self) -> bool:
        return self.family in TWISTED


def genus_from_degree(degree: int) -> int:
    return (degree - 1) // 2


def expected_counts(family: str, d: int) -> ExpectedCounts:
    """Genus, point-count lower bound N and rank lower bound R for (family, d).

    For kummer, d is the prime p. R is informational only.

    Raises:
        UnsupportedFamilyError: Unknown family or d outside the positive-genus range
    """
    if family == "kummer":
        if d < 3 or not isprime(d):
            raise UnsupportedFamilyError("Kummer family needs an odd prime p", {"family": family, "p": d})
        return ExpectedCounts(d - 1, 12 * d, 6 * (d - 1))
    if family not in MIN_D:
        raise UnsupportedFamilyError(f"Unknown family '{family}'", {"family": family})
    if d < MIN_D[family]:
        raise UnsupportedFamilyError(
            f"{family} has genus 0 for d={d}; need d >= {MIN_D[family]}",
            {"family": family, "d": d, "min_d": MIN_D[family]},
        )
    even, odd = d % 2 == 0, d % 2 == 1
    if family in ("gamma1", "baseline"):
        return ExpectedCounts((d - 2) // 2, 4 * d + even, 2 * d - 1)
    if family == "gamma2":
        return ExpectedCounts((d - 1) // 2, 4 * d + 1 + odd, 2 * d)
    if family == "gamma-tilde":
        return ExpectedCounts(d - 2, 8 * d, 6 if d == 3 else 4 * d - 1)
    if family == "theta1":
        return ExpectedCounts((3 * d - 4) // 2, 12 * d + even, 4 * d if d <= 3 else 6 * d - 1)
    if family == "theta2":
        return ExpectedCounts((3 * d - 3) // 2, 12 * d + 1 + odd, 8 if d == 2 else 6 * d)
    if family == "theta-tilde":
        return ExpectedCounts(3 * d - 4, 24 * d, {2: 16, 3: 30}.get(d, 12 * d - 1))
    if family == "lambda1":
        return ExpectedCounts(d - 2, 8 * d, 6 if d == 3 else 4 * d - 1)
    if family == "lambda2":
        return ExpectedCounts(d - 1, 8 * d + 2, 4 * d)
    # lambda-tilde
    return ExpectedCounts(2 * d - 3, 16 * d, {2: 8, 3: 18}.get(d, 8 * d - 1))


def family_inner(family: str, witness: CompositeWitness) -> Poly:
    """The polynomial substituted into ℓ for this family."""
    x = Poly.x(QQ)
    if family in ("gamma1", "gamma2", "baseline"):
        return x
    if family == "gamma-tilde":
        return x * x
    if family == "kummer":
        return Poly.monomial(QQ, witness.aux["p"])
    b = witness.aux["b"]
    if family in ("theta1", "theta2", "theta-tilde"):
        # ĝ(x) = x(x + b)²
        g_hat = x * (x + b) * (x + b)
        return g_hat.compose(x * x) if family == "theta-tilde" else g_hat
    g = x * x - x * b
    return g.compose(x * x) if family == "lambda-tilde" else g


def _inventory(family: str, witness: CompositeWitness, h: Poly) -> List[Tuple[str, Any, Any, Any]]:
    """(label, x, h(u_i), twist factor or None) for each positive-branch point."""
    aux = witness.aux
    u = aux["u"]
    hu = [h.eval(ui) for ui in u]
    entries = []
    if family in ("gamma1", "baseline"):
        entries = [(f"P{i + 1}", ui, hu[i], None) for i, ui in enumerate(u)]
    elif family == "gamma2":
        entries = [(f"Q{i + 1}", ui, hu[i], aux["t"][i]) for i, ui in enumerate(u)]
    elif family == "gamma-tilde":
        entries = [
            (f"P{i + 1}{tag}", sign * ti, hu[i], None)
            for i, ti in enumerate(aux["t"])
            for sign, tag in ((1, "+"), (-1, "-"))
        ]
    elif family in ("theta1", "theta2"):
        head = "P" if family == "theta1" else "Q"
        for i, row in enumerate(aux["T"]):
            for j, tij in enumerate(row):
                twist = tij if family == "theta2" else None
                entries.append((f"{head}{i + 1},{j + 1}", aux["U"][i][j], hu[i], twist))
    elif family == "theta-tilde":
        for i, row in enumerate(aux["T"]):
            for j, tij in enumerate(row):
                for sign, tag in ((1, "+"), (-1, "-")):
                    entries.append((f"P{i + 1},{j + 1}{tag}", sign * tij, hu[i], None))
    elif family in ("lambda1", "lambda2"):
        head = "P" if family == "lambda1" else "Q"
        for i, row in enumerate(aux["t"]):
            for j, tij in enumerate(row):
                twist = aux["z"][i][j] if family == "lambda2" else None
                entries.append((f"{head}{i + 1},{j + 1}", tij, hu[i], twist))
    elif family == "lambda-tilde":
        for i, row in enumerate(aux["z"]):
            for j, zij in enumerate(row):
                for sign, tag in ((1, "+"), (-1, "-")):
                    entries.append((f"P{i + 1},{j + 1}{tag}", sign * zij, hu[i], None))
    elif family == "kummer":
        field_ = cyclotomic_field(aux["p"])
        for i, ti in enumerate(aux["t"]):
            for j in range(aux["p"]):
                x = field_.zeta_power(j) * ti
                entries.append((f"P{i + 1},{j}", x, field_.coerce(hu[i]), None))
    return entries


def _witness_degree(family: str, witness: CompositeWitness) -> int:
    kind = WITNESS_KIND.get(family)
    if kind is None:
        raise UnsupportedFamilyError(f"Unknown family '{family}'", {"family": family})
    if witness.kind != kind:
        raise PreconditionError(
            f"{family} needs a {kind} witness, got {witness.kind}",
            {"family": family, "witness": witness.kind},
        )
    if family == "kummer":
        return witness.aux["p"]
    if witness.n % 2:
        raise PreconditionError("Witness must have an even number of blocks", {"n": witness.n})
    return witness.n // 2


def build_curve(family: str, witness: CompositeWitness) -> CurveSpec:
    """Build the family's curve and its full point inventory from a witness.

    Args:
        family: One of FAMILIES
        witness: B witness for gamma/theta, Z witness for lambda, kummer or baseline witness otherwise

    Returns:
        CurveSpec with points in the order described on CurveSpec

    Raises:
        UnsupportedFamilyError: Genus-0 request
        PreconditionError: Incompatible witness
        DegeneracyError: deg ℓ < d − 1, f not square-free, coincident points or a count mismatch
    """
    d = _witness_degree(family, witness)
    expected = expected_counts(family, d)
    ell_degree = 2 if family == "kummer" else d - 1

    h, ell = sqrt_approx(witness.outer)
    if ell.degree != ell_degree:
        raise DegeneracyError("deg l < d-1", details={"family": family, "degree": ell.degree})

    inner = family_inner(family, witness)
    f = ell.compose(inner)
    if family in TWISTED:
        f = f * Poly.x(QQ)
    if not is_squarefree(f):
        raise DegeneracyError("f not squarefree", details={"family": family})

    entries = _inventory(family, witness, h)
    points: List[Tuple[Any, Any]] = []
    for _, x, hval, twist in entries:
        y = hval * twist if twist is not None else hval
        points.extend([(x, y), (x, -y)])
    if family in TWISTED:
        points.append((QQ.zero, QQ.zero))
    if f.degree % 2:
        points.append(INFINITY)

    if len(set(points)) != len(points):
        raise DegeneracyError("coincident points", details={"family": family})
    if len(points) != expected.N:
        raise DegeneracyError(
            "point count mismatch",
            details={"family": family, "count": len(points), "expected": expected.N},
        )

    genus = genus_from_degree(f.degree)
    logger.info(f"Built {family} d={d}: deg f={f.degree}, genus={genus}, {len(points)} points")
    return CurveSpec(
        family=family,
        d=d,
        f=f,
        genus=genus,
        points=tuple(points),
        labels=tuple(label for label, _, _, _ in entries),
        h=h,
        l=ell,
        inner=inner,
        witness=witness,
        expected=expected,
    )


def _on_curve(curve: CurveSpec, point: Tuple[Any, Any]) -> bool:
    if point == INFINITY:
        return curve.f.degree % 2 == 1
    x, y = point
    return y * y == curve.f.eval(x)


def verify_points(curve: CurveSpec) -> VerificationReport:
    """Check every listed point, distinctness, square-freeness, genus and the count."""
    on_curve = [_on_curve(curve, pt) for pt in curve.points]
    failed = [i for i, ok in enumerate(on_curve) if not ok]
    distinct = len(set(curve.points)) == len(curve.points)
    squarefree = curve.f.degree >= 1 and is_squarefree(curve.f)
    from_degree = genus_from_degree(curve.f.degree)
    expected = curve.expected
    genus_ok = curve.genus == from_degree and (expected is None or expected.genus == from_degree)

    count = len(curve.points)
    count_ok = expected is None or count == expected.N
    # the inventories are exhaustive, so a surplus means a thin-set coincidence
    degenerate = expected is not None and count > expected.N

    rotation_stable = None
    if curve.family == "kummer":
        zeta = cyclotomic_field(curve.witness.aux["p"]).zeta
        listed = set(curve.points)
        rotation_stable = all(
            pt == INFINITY or (zeta * pt[0], pt[1]) in listed for pt in curve.points
        )

    passed = (
        not failed and distinct and squarefree and genus_ok and count_ok
        and rotation_stable is not False
    )
    if failed:
        logger.warning(f"{curve.family} d={curve.d}: {len(failed)} points off the curve: {failed[:10]}")
    return VerificationReport(
        family=curve.family,
        d=curve.d,
        degree=curve.f.degree,
        genus=curve.genus,
        genus_from_degree=from_degree,
        genus_ok=genus_ok,
        squarefree=squarefree,
        on_curve=on_curve,
        failed_points=failed,
        distinct=distinct,
        point_count=count,
        expected=ExpectedDocument(**expected._asdict()) if expected else None,
        count_ok=count_ok,
        degenerate=degenerate,
        rotation_stable=rotation_stable,
        passed=passed,
    )


def relation_witness(curve: CurveSpec) -> WitnessReport:
    """Certify the divisor relation carried by y − h(inner(x)).

    Checks (i) h(inner)² − ℓ(inner) = ∏(x − x_i) over the positive-branch
    points and (ii) y_i = h(inner(x_i)) at each of them. For the twisted
    families no rational function realizes the divisor; there (ii) becomes
    y_i² = x_i·h(inner(x_i))².

    Raises:
        PreconditionError: For families without either witness
    """
    if curve.family not in FUNCTION_WITNESS and curve.family not in TWISTED:
        raise PreconditionError(f"No relation witness for {curve.family}", {"family": curve.family})
    field_ = curve.point_field
    primaries = curve.primary_points
    xs = [pt[0] for _, pt in primaries]

    h_inner = curve.h.compose(curve.inner)
    lhs = h_inner * h_inner - curve.l.compose(curve.inner)
    if field_ != QQ:
        lhs = lhs.map_coeffs(field_)
    diff = lhs - Poly.from_roots(field_, xs)
    offending = None
    if not diff.is_zero:
        offending = next(i for i, c in enumerate(diff.coeffs) if c)
        logger.warning(f"{curve.family} d={curve.d}: identity fails at coefficient {offending}")

    twisted = curve.family in TWISTED
    failed = []
    for k, (_, (x, y)) in enumerate(primaries):
        hx = h_inner.eval(x)
        ok = y * y == x * hx * hx if twisted else y == hx
        if not ok:
            failed.append(2 * k)

    relation = (
        "sum of eps over positive-branch points = 0"
        if not twisted
        else "positive-branch points split m(inner(x)); no function witness"
    )
    return WitnessReport(
        family=curve.family,
        d=curve.d,
        function_witness=not twisted,
        relation=relation,
        identity_ok=offending is None,
        offending_index=offending,
        points_ok=not failed,
        failed_points=failed,
        passed=offending is None and not failed,
    )


def two_torsion_witness(curve: CurveSpec) -> bool:
    """True iff (0, 0) is a rational Weierstrass point distinct from ∞.

    Raises:
        PreconditionError: Wrong family or even-degree model
    """
    if curve.family not in TWISTED:
        raise PreconditionError(f"Two-torsion witness needs one of {TWISTED}", {"family": curve.family})
    if curve.f.degree % 2 == 0:
        raise PreconditionError("Two-torsion witness needs deg f odd", {"degree": curve.f.degree})
    return curve.f.coeff(0) == 0 and curve.f.coeff(1) != 0


def claimed_relations(curve: CurveSpec, kind: str) -> List[List[int]]:
    """Integer relations among the classes of the positive-branch points.

    ``kind="eps"`` uses ε(P) = [2P − D_∞]; ``kind="r"`` uses [P − (0, 0)]
    on the twisted families, which carry no relations.
    """
    k = len(curve.labels)
    if kind == "r":
        if curve.family not in TWISTED:
            raise PreconditionError("r-classes need the point (0, 0)", {"family": curve.family})
        return []
    if kind != "eps":
        raise PreconditionError(f"Unknown class kind '{kind}'", {"kind": kind})
    if curve.family in TWISTED:
        return []
    if curve.family == "theta1" and curve.d <= 3:
        return [[1 if 3 * i <= c < 3 * i + 3 else 0 for c in range(k)] for i in range(k // 3)]
    return [[1] * k]


def forge_curve(
    family: str,
    d: int,
    seed: int,
    height: int = 50,
    max_retries: int = 32,
) -> CurveSpec:
    """Sample witnesses until the family's curve builds cleanly.

    For kummer, ``d`` is the prime p.

    Raises:
        UnsupportedFamilyError: Unsupported (family, d)
        RetriesExhaustedError: Every attempt was degenerate
    """
    if family not in FAMILIES:
        raise UnsupportedFamilyError(f"Unknown family '{family}'", {"family": family})
    expected_counts(family, d)
    kind = WITNESS_KIND[family]
    n = 6 if kind == "kummer" else 2 * d
    p = d if kind == "kummer" else None

    rng = Random(seed)
    failures: List[str] = []
    for attempt in range(max_retries):
        try:
            witness = sample_witness(kind, n, rng, height, p)
            witness = CompositeWitness(
                witness.kind, witness.n, witness.roots, witness.inner, witness.outer, witness.aux, seed
            )
            return build_curve(family, witness)
        except (DegeneracyError, SingularError) as e:
            logger.warning(f"forge {family} d={d} seed={seed} attempt {attempt}: {e.message}")
            failures.append(e.details.get("condition", e.code))
    raise RetriesExhaustedError(
        f"No non-degenerate {family} curve after {max_retries} attempts",
        {"family": family, "d": d, "seed": seed, "failures": failures},
    )
