"""Composite tuples and their rational parametrizations.

A composite tuple is a list of roots whose product polynomial factors as
M(G(x)). Four sources are provided:
- param_B: the sextic family with blocks {±T_i1, ±T_i2, ±T_i3}, inner g(x)², g = x³ + bx
- param_Z: the quartic family with blocks {±z_i1, ±z_i2}, inner g(x²), g = x² − bx
- kummer_tuple: blocks {ζʲ·t_i}, inner x^p, over ℚ(ζₚ)
- baseline_tuple: free roots, inner x

Every witness keeps the auxiliary scalars the curve builders need, so the
builder and the verifier read the same values.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from random import Random
from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging

from .algebra import (
    EISENSTEIN,
    GAUSSIAN,
    CycloElem,
    QuadElem,
    cyclotomic_field,
    norm_one_param,
    quad_inv,
)
from .base import DegeneracyError, PreconditionError, RetriesExhaustedError, SingularError
from .fields import QQ
from .poly import Poly

logger = logging.getLogger(__name__)

WITNESS_KINDS = ("B", "Z", "kummer", "baseline", "blocks")

# Block size e of each witness kind (kummer uses p)
BLOCK_SIZE = {"B": 6, "Z": 4, "baseline": 1}


@dataclass(frozen=True)
class CompositeWitness:
    """Roots a_i with ∏(x − a_i) = outer(inner(x))."""

    kind: str
    n: int
    roots: Tuple[Any, ...]
    inner: Poly
    outer: Poly
    aux: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None

    @property
    def root_field(self) -> Any:
        if self.kind == "kummer":
            return cyclotomic_field(self.aux["p"])
        if self.kind == "blocks" and self.roots:
            return _field_of(self.roots[0])
        return QQ

    @property
    def block_size(self) -> int:
        if self.kind == "kummer":
            return self.aux["p"]
        if self.kind == "blocks":
            return self.inner.degree
        return BLOCK_SIZE[self.kind]

    def blocks(self) -> List[List[Any]]:
        e = self.block_size
        return [list(self.roots[i:i + e]) for i in range(0, len(self.roots), e)]

    def identity_holds(self) -> bool:
        """Check ∏(x − a_i) = outer∘inner by exact expansion."""
        f = self.root_field
        lhs = Poly.from_roots(f, self.roots)
        rhs = self.outer.compose(self.inner)
        if f != rhs.field:
            rhs = rhs.map_coeffs(f)
        return lhs == rhs


def _distinct(values: Sequence[Any]) -> bool:
    return len(set(values)) == len(values)


def _check_count(name: str, values: Sequence[Any], expected: int) -> None:
    if len(values) != expected:
        raise PreconditionError(
            f"Expected {expected} values for {name}, got {len(values)}",
            {"param": name, "expected": expected, "actual": len(values)},
        )


def _torus_points(n: int, w: QuadElem, s: Sequence[Any], alg: str) -> List[QuadElem]:
    """z_1 = w⁻¹ and z_i = norm_one_param(s_i)·w⁻¹: n points on one norm level set."""
    if n < 2:
        raise PreconditionError("Need n >= 2 blocks", {"n": n})
    _check_count("s", s, n - 1)
    if w.alg != alg:
        raise PreconditionError(f"w must lie in the {alg} algebra", {"alg": w.alg})
    w_inv = quad_inv(w)
    return [w_inv] + [norm_one_param(si, alg) * w_inv for si in s]


def param_B(n: int, w: QuadElem, s: Sequence[Any]) -> CompositeWitness:
    """Rational point of the sextic composite family from a torus parameter.

    Args:
        n: Number of blocks (≥ 2)
        w: Eisenstein element of nonzero norm
        s: n − 1 rationals

    Returns:
        Witness with roots {±T_ij}, inner g(x)², outer m

    Raises:
        SingularError: If norm(w) = 0
        DegeneracyError: On repeated u_i, a zero T_ij, or b = 0
    """
    zs = _torus_points(n, w, s, EISENSTEIN)
    T = [[z.a, z.b, -(z.a + z.b)] for z in zs]
    b = -zs[0].norm()
    t = [row[0] * row[1] * row[2] for row in T]
    u = [ti * ti for ti in t]

    if not _distinct(u):
        raise DegeneracyError("repeated u_i")
    if any(v == 0 for row in T for v in row):
        raise DegeneracyError("zero T_ij")
    if b == 0:
        raise DegeneracyError("b = 0")

    x = Poly.x(QQ)
    g = x * x * x + x * b
    m = Poly.from_roots(QQ, u)
    roots = tuple(sign * v for row in T for v in row for sign in (1, -1))
    aux = {
        "b": b,
        "w": w,
        "s": [Fraction(si) for si in s],
        "t": t,
        "u": u,
        "T": T,
        "U": [[v * v for v in row] for row in T],
    }
    logger.debug(f"param_B n={n}: b={b}")
    return CompositeWitness("B", n, roots, g * g, m, aux)


def param_Z(n: int, w: QuadElem, s: Sequence[Any]) -> CompositeWitness:
    """Rational point of the quartic composite family from a torus parameter.

    Returns:
        Witness with roots {±z_i1, ±z_i2}, inner g(x²), outer m

    Raises:
        SingularError: If norm(w) = 0
        DegeneracyError: On repeated u_i or a zero z_ij
    """
    zs = _torus_points(n, w, s, GAUSSIAN)
    z = [[zi.a, zi.b] for zi in zs]
    tt = [[v * v for v in row] for row in z]
    b = zs[0].norm()
    if b == 0:
        raise SingularError("Torus points lie on the zero norm level", {"b": str(b)})
    u = [-(row[0] * row[1]) for row in tt]

    if not _distinct(u):
        raise DegeneracyError("repeated u_i")
    if any(v == 0 for row in z for v in row):
        raise DegeneracyError("zero z_ij")

    x = Poly.x(QQ)
    g = x * x - x * b
    m = Poly.from_roots(QQ, u)
    roots = tuple(sign * v for row in z for v in row for sign in (1, -1))
    aux = {"b": b, "w": w, "s": [Fraction(si) for si in s], "z": z, "t": tt, "u": u}
    return CompositeWitness("Z", n, roots, g.compose(x * x), m, aux)


def kummer_tuple(p: int, t: Sequence[Any]) -> CompositeWitness:
    """Six blocks {ζʲ·t_i} over ℚ(ζₚ) with inner x^p.

    Raises:
        DegeneracyError: If the t_i are not distinct and nonzero with distinct p-th powers
    """
    _check_count("t", t, 6)
    field_ = cyclotomic_field(p)
    t = [Fraction(ti) for ti in t]
    if any(ti == 0 for ti in t):
        raise DegeneracyError("zero t_i")
    if not _distinct(t):
        raise DegeneracyError("repeated t_i")
    u = [ti ** p for ti in t]
    if not _distinct(u):
        raise DegeneracyError("repeated t_i^p")

    zetas = [field_.zeta_power(j) for j in range(p)]
    roots = tuple(zeta * ti for ti in t for zeta in zetas)
    inner = Poly.monomial(QQ, p)
    return CompositeWitness("kummer", 6, roots, inner, Poly.from_roots(QQ, u), {"p": p, "t": t, "u": u})


def baseline_tuple(d: int, u: Sequence[Any]) -> CompositeWitness:
    """Free tuple of 2d distinct rationals with inner x.

    Raises:
        DegeneracyError: On repeated values
    """
    if d < 2:
        raise PreconditionError("Baseline tuple needs d >= 2", {"d": d})
    _check_count("u", u, 2 * d)
    u = [Fraction(ui) for ui in u]
    if not _distinct(u):
        raise DegeneracyError("repeated u_i")
    return CompositeWitness("baseline", 2 * d, tuple(u), Poly.x(QQ), Poly.from_roots(QQ, u), {"u": u})


def _uniform_blocks(blocks: Sequence[Sequence[Any]]) -> int:
    if not blocks:
        raise PreconditionError("At least one block is required")
    sizes = {len(block) for block in blocks}
    if len(sizes) != 1 or 0 in sizes:
        raise PreconditionError("Blocks must be non-empty and of equal size", {"sizes": sorted(sizes)})
    return sizes.pop()


def check_pte(blocks: Sequence[Sequence[Any]]) -> bool:
    """True iff power sums of orders 1..e−1 agree across all blocks.

    Raises:
        PreconditionError: If the blocks are ragged
    """
    e = _uniform_blocks(blocks)
    powers = [list(block) for block in blocks]
    for _ in range(1, e):
        for i, block in enumerate(blocks):
            powers[i] = [pw * a for pw, a in zip(powers[i], block)]
        sums = [sum(pw[1:], pw[0]) for pw in powers]
        if any(s != sums[0] for s in sums[1:]):
            return False
    return True


def _field_of(value: Any) -> Any:
    if isinstance(value, CycloElem):
        return cyclotomic_field(value.p)
    return QQ


def composite_from_blocks(blocks: Sequence[Sequence[Any]]) -> CompositeWitness:
    """Composite witness from blocks with equal power sums.

    G is the product polynomial of the first block with its constant term
    removed; block i then has product polynomial G − c_i, so M = ∏(y − c_i).

    Raises:
        PreconditionError: If the blocks fail the power-sum test
    """
    e = _uniform_blocks(blocks)
    if not check_pte(blocks):
        raise PreconditionError("Blocks do not have equal power sums", {"block_size": e})
    f = _field_of(blocks[0][0])
    first = Poly.from_roots(f, blocks[0])
    g = first - first.coeff(0)
    c = [g.eval(block[0]) for block in blocks]
    roots = tuple(a for block in blocks for a in block)
    return CompositeWitness("blocks", len(blocks), roots, g, Poly.from_roots(f, c), {"c": c})


# Sampling


def sample_rational(rng: Random, height: int) -> Fraction:
    """Numerator in [−H, H], denominator in [1, H]."""
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def sample_witness(kind: str, n: int, rng: Random, height: int, p: Optional[int] = None) -> CompositeWitness:
    """One sampling attempt; raises DegeneracyError or SingularError on thin-set samples.

    For ``kind="baseline"`` n is the tuple length 2d; for ``kind="kummer"`` n is fixed at 6.
    """
    if kind in ("B", "Z"):
        alg = EISENSTEIN if kind == "B" else GAUSSIAN
        w = QuadElem(sample_rational(rng, height), sample_rational(rng, height), alg)
        s = [sample_rational(rng, height) for _ in range(n - 1)]
        return param_B(n, w, s) if kind == "B" else param_Z(n, w, s)
    if kind == "kummer":
        if p is None:
            raise PreconditionError("Kummer sampling needs p")
        return kummer_tuple(p, [sample_rational(rng, height) for _ in range(6)])
    if kind == "baseline":
        if n % 2:
            raise PreconditionError("Baseline tuple length must be even", {"n": n})
        return baseline_tuple(n // 2, [sample_rational(rng, height) for _ in range(n)])
    raise PreconditionError(f"Unknown witness kind '{kind}'", {"kind": kind})


def draw_witness(
    kind: str,
    n: int,
    seed: int,
    height: int = 50,
    max_retries: int = 32,
    p: Optional[int] = None,
) -> CompositeWitness:
    """Sample until a non-degenerate witness appears.

    Raises:
        RetriesExhaustedError: After ``max_retries`` degenerate attempts
    """
    rng = Random(seed)
    failures: List[str] = []
    for attempt in range(max_retries):
        try:
            witness = sample_witness(kind, n, rng, height, p)
        except (DegeneracyError, SingularError) as e:
            logger.warning(f"Witness {kind} n={n} seed={seed} attempt {attempt}: {e.message}")
            failures.append(e.details.get("condition", e.code))
            continue
        logger.info(f"Witness {kind} n={n} seed={seed} accepted on attempt {attempt}")
        return CompositeWitness(witness.kind, witness.n, witness.roots, witness.inner, witness.outer, witness.aux, seed)
    raise RetriesExhaustedError(
        f"No non-degenerate {kind} witness after {max_retries} attempts",
        {"kind": kind, "n": n, "seed": seed, "failures": failures},
    )
