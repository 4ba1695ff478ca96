"""Pydantic document models for every JSON artifact the tool reads or writes."""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

RANK_NOTE = "published lower bound, not machine-certified"


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ExpectedDocument(_Document):
    genus: int
    N: int
    R: int
    R_note: str = RANK_NOTE


class WitnessDocument(_Document):
    family: str = Field(..., description="B, Z, kummer, baseline or blocks")
    n: int = Field(..., ge=1)
    roots: List[Any]
    inner: List[Any]
    outer: List[Any]
    aux: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None
    pte: Optional[bool] = None


class CurveDocument(_Document):
    family: str
    d: int
    f: List[str]
    genus: int
    points: List[List[Any]]
    labels: List[str]
    h: List[str]
    l: List[str]
    inner: List[str]
    expected: Optional[ExpectedDocument] = None
    witness: WitnessDocument


class VerificationReport(_Document):
    """Outcome of checking a curve's point inventory."""

    family: str
    d: int
    degree: int
    genus: int
    genus_from_degree: int
    genus_ok: bool
    squarefree: bool
    on_curve: List[bool]
    failed_points: List[int] = Field(default_factory=list)
    distinct: bool
    point_count: int
    expected: Optional[ExpectedDocument] = None
    count_ok: bool
    degenerate: bool = False
    rotation_stable: Optional[bool] = None
    passed: bool


class WitnessReport(_Document):
    """Outcome of the factorization-identity check behind a divisor relation."""

    family: str
    d: int
    function_witness: bool
    relation: str
    identity_ok: bool
    offending_index: Optional[int] = None
    points_ok: bool
    failed_points: List[int] = Field(default_factory=list)
    passed: bool


class RelationReport(_Document):
    classes: List[str]
    kind: str
    primes: List[int]
    bound: int
    support: int
    found_relations: List[List[int]]
    claimed_relations: List[List[int]]
    unexpected: List[List[int]] = Field(default_factory=list)
    missing: List[List[int]] = Field(default_factory=list)
    group_operations: int = 0
    scope: str
    verdict: str
    rank_note: str = RANK_NOTE


class IgusaDocument(_Document):
    I2: str
    I4: str
    I6: str
    I10: str


class CompareDocument(_Document):
    equivalent: bool
    over: str
    a: IgusaDocument
    b: IgusaDocument


class ManifestEntry(_Document):
    seed: int
    path: Optional[str] = None
    success: bool
    error: Optional[Dict[str, Any]] = None


class ManifestDocument(_Document):
    family: str
    d: int
    entries: List[ManifestEntry]


class VerifyDocument(_Document):
    verification: VerificationReport
    witness: Optional[WitnessReport] = None
    two_torsion: Optional[bool] = None
    passed: bool


class PteDocument(_Document):
    witness: WitnessDocument
    block_size: int
    pte: bool
    identity_ok: bool
