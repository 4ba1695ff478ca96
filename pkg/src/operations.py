"""
Curve Operations Module.

Drives the pipelines behind the command line:
- forge: sample a witness, build a family curve, write it (optionally in batches)
- verify: re-check a stored curve's points, genus and divisor-relation witness
- sieve: reduce rational classes at good primes and search for small relations
- pte: certify equal power sums for a sampled or stored composite witness
- invariants / compare: Igusa-Clebsch invariants of genus-2 curves
"""

from multiprocessing import Pool
from pathlib import Path
from typing import Any, Dict, List, Optional
import logging

from .base import BaseOperation, OperationError, ParseError, UnsupportedFamilyError
from .config import get_settings
from .composite import WITNESS_KINDS, draw_witness
from .curves import FAMILIES, FUNCTION_WITNESS, TWISTED, forge_curve, relation_witness, two_torsion_witness, verify_points
from .invariants import OVER_CHOICES, curve_invariants, weighted_equivalent
from .models import (
    CompareDocument,
    CurveDocument,
    ManifestDocument,
    ManifestEntry,
    PteDocument,
    VerifyDocument,
    WitnessDocument,
)
from .serialization import (
    curve_from_document,
    curve_to_document,
    parse_document,
    read_curve,
    witness_from_document,
    witness_pte,
    witness_to_document,
    write_document,
)
from .sieve import sieve_curve

logger = logging.getLogger(__name__)

CLASS_CHOICES = ["eps", "r"]
SAMPLED_KINDS = ["B", "Z", "kummer", "baseline"]


def _forge_task(task: Dict[str, Any]) -> Dict[str, Any]:
    """Forge one curve of a batch and write it; runs in a worker process."""
    seed = task["seed"]
    try:
        curve = forge_curve(task["family"], task["d"], seed, task["height"], task["max_retries"])
        report = verify_points(curve)
        if not report.passed:
            logger.error(f"Batch forge seed={seed}: verification failed")
            error = {"code": "VERIFY_FAILED", "message": "Forged curve failed verification", "details": {}}
            return ManifestEntry(seed=seed, success=False, error=error).model_dump()
        path = Path(task["out_dir"]) / f"{task['family']}-d{task['d']}-seed{seed}.json"
        write_document(path, curve_to_document(curve))
        return ManifestEntry(seed=seed, path=path.name, success=True).model_dump()
    except OperationError as e:
        logger.error(f"Batch forge seed={seed} failed: {e.code} - {e.message}")
        error = {"code": e.code, "message": e.message, "details": e.details}
        return ManifestEntry(seed=seed, success=False, error=error).model_dump()


class CurveOperations(BaseOperation):
    """Curve forging, verification and probing."""

    def get_supported_actions(self) -> List[str]:
        return ["forge", "verify", "sieve", "pte", "invariants", "compare"]

    def _validate_action_params(self, action: str, params: Dict) -> None:
        if action == "forge":
            family = self._require_param(params, "family", str)
            self._validate_choice(family, list(FAMILIES), "family")
            self._validate_positive_int(self._require_param(params, "d", int), "d")
            self._validate_positive_int(params.get("count", 1), "count")
            self._validate_positive_int(params.get("jobs", 1), "jobs")
            if params.get("count", 1) > 1 and params.get("out") is None:
                raise OperationError(
                    code="MISSING_PARAM",
                    message="Batch forging needs an output directory",
                    details={"param": "out"},
                )
        elif action in ("verify", "sieve", "invariants"):
            self._require_param(params, "path")
            if action == "sieve":
                self._validate_choice(params.get("classes", "r"), CLASS_CHOICES, "classes")
        elif action == "compare":
            self._require_param(params, "path")
            self._require_param(params, "other")
            self._validate_choice(params.get("over", "rational"), list(OVER_CHOICES), "over")
        elif action == "pte":
            if params.get("path") is None:
                self._validate_choice(self._require_param(params, "family", str), SAMPLED_KINDS, "family")
                self._validate_positive_int(self._require_param(params, "d", int), "d", minimum=2)

    def _execute_action(self, action: str, params: Dict) -> Any:
        actions = {
            "forge": self._forge,
            "verify": self._verify,
            "sieve": self._sieve,
            "pte": self._pte,
            "invariants": self._invariants,
            "compare": self._compare,
        }
        return actions[action](params)

    def _family_degree(self, params: Dict) -> int:
        family, d = params["family"], params["d"]
        if family != "kummer":
            return d
        limit = params.get("max_cyclotomic_prime", get_settings().max_cyclotomic_prime)
        if d > limit:
            raise UnsupportedFamilyError(
                f"Kummer prime {d} exceeds max_cyclotomic_prime={limit}",
                {"p": d, "max_cyclotomic_prime": limit},
            )
        return d

    def _forge(self, params: Dict) -> Dict:
        """
        Forge one curve, or a batch of ``count`` curves with consecutive seeds.

        Args:
            params: Must contain:
                - family: Curve family
                - d: Family parameter (the prime p for kummer)
                - seed, height, max_retries (optional)
                - count, jobs, out (optional)
        """
        settings = get_settings()
        family = params["family"]
        d = self._family_degree(params)
        seed = params.get("seed", settings.seed)
        height = params.get("height", settings.height)
        max_retries = params.get("max_retries", settings.max_retries)
        count = params.get("count", 1)

        if count == 1:
            curve = forge_curve(family, d, seed, height, max_retries)
            report = verify_points(curve)
            if report.degenerate:
                status = "degenerate"
            else:
                status = "pass" if report.passed else "fail"
            logger.info(
                f"Forged {family} d={d} seed={seed}: genus {curve.genus}, {report.point_count} points, {status}"
            )
            return {"document": curve_to_document(curve), "status": status, "summary": f"genus {curve.genus}, {status}"}

        tasks = [
            {
                "family": family,
                "d": d,
                "seed": seed + k,
                "height": height,
                "max_retries": max_retries,
                "out_dir": str(params["out"]),
            }
            for k in range(count)
        ]
        jobs = params.get("jobs", settings.jobs)
        if jobs > 1:
            with Pool(jobs) as pool:
                results = pool.map(_forge_task, tasks)
        else:
            results = [_forge_task(task) for task in tasks]
        entries = [ManifestEntry(**result) for result in results]
        failed = sum(1 for entry in entries if not entry.success)
        unverified = any(entry.error and entry.error["code"] == "VERIFY_FAILED" for entry in entries)
        logger.info(f"Batch forge {family} d={d}: {count - failed}/{count} curves written")
        return {
            "document": ManifestDocument(family=family, d=d, entries=entries),
            "status": "pass" if not failed else ("fail" if unverified else "degenerate"),
            "summary": f"{count - failed}/{count} written",
        }

    def _verify(self, params: Dict) -> Dict:
        curve = read_curve(params["path"])
        report = verify_points(curve)
        witness = None
        if curve.family in FUNCTION_WITNESS or curve.family in TWISTED:
            witness = relation_witness(curve)
        torsion = None
        if curve.family in TWISTED and curve.f.degree % 2:
            torsion = two_torsion_witness(curve)

        passed = report.passed and (witness is None or witness.passed) and torsion is not False
        if report.degenerate:
            status = "degenerate"
        else:
            status = "pass" if passed else "fail"
        logger.info(f"Verify {curve.family} d={curve.d}: {status}")
        doc = VerifyDocument(verification=report, witness=witness, two_torsion=torsion, passed=passed)
        return {"document": doc, "status": status, "summary": status}

    def _sieve(self, params: Dict) -> Dict:
        curve = read_curve(params["path"])
        defaults = get_settings().sieve
        report = sieve_curve(
            curve,
            kind=params.get("classes", defaults.classes),
            prime_count=params.get("prime_count", defaults.prime_count),
            prime_min=params.get("prime_min", defaults.prime_min),
            prime_max=params.get("prime_max", defaults.prime_max),
            bound=params.get("bound", defaults.bound),
            support=params.get("support", defaults.support),
            op_budget=params.get("op_budget", defaults.op_budget),
        )
        status = "pass" if report.verdict == "PASS" else "fail"
        logger.info(
            f"Sieve {curve.family} d={curve.d}: {report.verdict}, "
            f"{len(report.found_relations)} survivors, {len(report.unexpected)} unexpected"
        )
        return {"document": report, "status": status, "summary": report.verdict}

    def _pte(self, params: Dict) -> Dict:
        path: Optional[Path] = params.get("path")
        if path is not None:
            text = Path(path).read_text()
            try:
                witness = curve_from_document(parse_document(text, CurveDocument, str(path))).witness
            except ParseError:
                witness = witness_from_document(parse_document(text, WitnessDocument, str(path)))
        else:
            kind = params["family"]
            # d counts blocks; a baseline tuple has 2d entries
            n = 2 * params["d"] if kind == "baseline" else params["d"]
            p = None
            if kind == "kummer":
                p, n = self._family_degree(params), 6
            settings = get_settings()
            witness = draw_witness(
                kind,
                n,
                params.get("seed", settings.seed),
                params.get("height", settings.height),
                params.get("max_retries", settings.max_retries),
                p,
            )
        if witness.kind not in WITNESS_KINDS:
            raise OperationError(
                code="INVALID_PARAM",
                message=f"Unknown witness kind '{witness.kind}'",
                details={"kind": witness.kind},
            )
        pte = witness_pte(witness)
        identity = witness.identity_holds()
        logger.info(f"PTE {witness.kind} n={witness.n}: pte={pte}, identity={identity}")
        doc = PteDocument(
            witness=witness_to_document(witness, pte),
            block_size=witness.block_size,
            pte=pte,
            identity_ok=identity,
        )
        return {"document": doc, "status": "pass" if pte and identity else "fail", "summary": f"pte={pte}"}

    def _invariants(self, params: Dict) -> Dict:
        curve = read_curve(params["path"])
        values = curve_invariants(curve.f)
        return {"document": values.to_document(), "status": "pass", "summary": str(tuple(str(v) for v in values))}

    def _compare(self, params: Dict) -> Dict:
        over = params.get("over", "rational")
        a = curve_invariants(read_curve(params["path"]).f)
        b = curve_invariants(read_curve(params["other"]).f)
        equivalent = weighted_equivalent(a, b, over)
        doc = CompareDocument(equivalent=equivalent, over=over, a=a.to_document(), b=b.to_document())
        # a "no" is an answer, not a failure
        return {"document": doc, "status": "pass", "summary": f"equivalent={equivalent}"}
