"""
hypercurves command line
Exact construction and checking of hyperelliptic curve families with many rational points

Subcommands (5):
- forge: sample a witness and build a family curve (batches with --count)
- verify: check a stored curve's points, genus and relation witness
- sieve: search for small relations among reduced divisor classes
- pte: certify equal power sums of a composite witness
- invariants: Igusa-Clebsch invariants of a genus-2 curve (--compare for equivalence)

Exit codes: 0 pass, 1 check failure, 2 degenerate, unsupported or invalid request, 3 parse or I/O error.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from .base import OperationError
from .config import Settings, load_settings, set_settings
from .curves import FAMILIES
from .invariants import OVER_CHOICES
from .operations import CLASS_CHOICES, CurveOperations
from .serialization import dump_document, write_atomic

# Configure logging
logging.basicConfig(level=os.getenv("LOG_LEVEL", "INFO"))
logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_DEGENERATE = 2
EXIT_IO = 3

ERROR_EXIT_CODES = {
    "PARSE_ERROR": EXIT_IO,
    "IO_ERROR": EXIT_IO,
    "DEGENERACY": EXIT_DEGENERATE,
    "UNSUPPORTED_FAMILY": EXIT_DEGENERATE,
    "RETRIES_EXHAUSTED": EXIT_DEGENERATE,
    "BAD_REDUCTION": EXIT_DEGENERATE,
    "BUDGET_EXCEEDED": EXIT_DEGENERATE,
    "PRECONDITION_FAILED": EXIT_DEGENERATE,
    "INDETERMINATE": EXIT_DEGENERATE,
    # usage errors share argparse's exit status
    "MISSING_PARAM": EXIT_DEGENERATE,
    "INVALID_PARAM": EXIT_DEGENERATE,
    "INVALID_PARAM_TYPE": EXIT_DEGENERATE,
    "INVALID_PARAM_VALUE": EXIT_DEGENERATE,
    "INVALID_CHOICE": EXIT_DEGENERATE,
    "INVALID_ACTION": EXIT_DEGENERATE,
}

STATUS_EXIT_CODES = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "degenerate": EXIT_DEGENERATE}

curve_ops = CurveOperations()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypercurves", description=__doc__.splitlines()[2])
    parser.add_argument("--config", type=Path, default=None, help="JSON config file (flags override it)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", type=Path, default=None, help="Output path (stdout if omitted)")
        p.add_argument("--config", type=Path, default=argparse.SUPPRESS, help="JSON config file")

    def sampling(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--height", type=int, default=None, help="Sampling height H")
        p.add_argument("--max-retries", type=int, default=None)

    forge = sub.add_parser("forge", help="Build a curve from a sampled witness")
    forge.add_argument("--family", required=True, choices=FAMILIES)
    forge.add_argument("--d", type=int, default=None)
    forge.add_argument("--p", type=int, default=None, help="Prime for the kummer family")
    forge.add_argument("--count", type=int, default=1, help="Number of curves (seeds seed, seed+1, ...)")
    forge.add_argument("--jobs", type=int, default=None)
    sampling(forge)
    common(forge)

    verify = sub.add_parser("verify", help="Verify a curve file")
    verify.add_argument("path", type=Path)
    common(verify)

    sieve = sub.add_parser("sieve", help="Relation sieve on a curve file")
    sieve.add_argument("path", type=Path)
    sieve.add_argument("--primes", type=int, default=None, help="Number of good primes")
    sieve.add_argument("--prime-min", type=int, default=None)
    sieve.add_argument("--prime-max", type=int, default=None)
    sieve.add_argument("--bound", type=int, default=None, help="Coefficient bound B")
    sieve.add_argument("--support", type=int, default=None, help="Support bound s")
    sieve.add_argument("--op-budget", type=int, default=None)
    sieve.add_argument("--classes", choices=CLASS_CHOICES, default=None)
    common(sieve)

    pte = sub.add_parser("pte", help="Check equal power sums of a witness")
    pte.add_argument("path", type=Path, nargs="?", default=None, help="Witness or curve file")
    pte.add_argument("--family", choices=["B", "Z", "kummer", "baseline"], default=None)
    pte.add_argument("--d", type=int, default=None, help="Number of blocks (d for baseline)")
    pte.add_argument("--p", type=int, default=None, help="Prime for kummer witnesses")
    sampling(pte)
    common(pte)

    inv = sub.add_parser("invariants", help="Igusa-Clebsch invariants of a genus-2 curve")
    inv.add_argument("path", type=Path)
    inv.add_argument("--compare", type=Path, default=None, help="Second curve file")
    inv.add_argument("--over", choices=OVER_CHOICES, default="rational", help="Field of the scaling factor r")
    common(inv)

    return parser


def _settings_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    sieve = {
        "prime_count": getattr(args, "primes", None),
        "prime_min": getattr(args, "prime_min", None),
        "prime_max": getattr(args, "prime_max", None),
        "bound": getattr(args, "bound", None),
        "support": getattr(args, "support", None),
        "op_budget": getattr(args, "op_budget", None),
        "classes": getattr(args, "classes", None),
    }
    return {
        "seed": getattr(args, "seed", None),
        "height": getattr(args, "height", None),
        "max_retries": getattr(args, "max_retries", None),
        "jobs": getattr(args, "jobs", None),
        "out": getattr(args, "out", None),
        "sieve": sieve,
    }


def _action_params(args: argparse.Namespace, settings: Settings) -> Dict[str, Any]:
    sampling = {
        "seed": settings.seed,
        "height": settings.height,
        "max_retries": settings.max_retries,
        "max_cyclotomic_prime": settings.max_cyclotomic_prime,
    }
    if args.command == "forge":
        d = args.p if args.family == "kummer" and args.p is not None else args.d
        return {
            "family": args.family,
            "d": d,
            "count": args.count,
            "jobs": settings.jobs,
            "out": settings.out,
            **sampling,
        }
    if args.command == "pte":
        d = args.p if args.family == "kummer" and args.p is not None else args.d
        return {"path": args.path, "family": args.family, "d": d, **sampling}
    if args.command == "sieve":
        s = settings.sieve
        return {
            "path": args.path,
            "classes": s.classes,
            "prime_count": s.prime_count,
            "prime_min": s.prime_min,
            "prime_max": s.prime_max,
            "bound": s.bound,
            "support": s.support,
            "op_budget": s.op_budget,
        }
    if args.command == "invariants" and args.compare is not None:
        return {"path": args.path, "other": args.compare, "over": args.over}
    return {"path": args.path}


def exit_code(response: Dict[str, Any]) -> int:
    if not response["success"]:
        return ERROR_EXIT_CODES.get(response["error"]["code"], EXIT_FAIL)
    return STATUS_EXIT_CODES[response["data"]["status"]]


def _emit(response: Dict[str, Any], out: Optional[Path], batch: bool) -> None:
    """Machine JSON to the output path (or stdout); nothing else goes there."""
    text = dump_document(response["data"]["document"])
    if out is None:
        sys.stdout.write(text)
        return
    target = out / "manifest.json" if batch else out
    write_atomic(target, text)
    logger.info(f"Wrote {target}")


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings(args.config, _settings_overrides(args))
    except OperationError as e:
        logger.error(f"{e.code}: {e.message}")
        return ERROR_EXIT_CODES.get(e.code, EXIT_FAIL)
    set_settings(settings)

    action = "compare" if args.command == "invariants" and args.compare is not None else args.command
    response = curve_ops.execute(action, _action_params(args, settings))
    code = exit_code(response)

    if not response["success"]:
        error = response["error"]
        logger.error(f"{action} failed ({error['code']}): {error['message']} {error['details']}")
        return code

    try:
        _emit(response, settings.out, batch=action == "forge" and args.count > 1)
    except OSError as e:
        logger.error(f"Cannot write output: {e}")
        return EXIT_IO
    logger.info(f"{action}: {response['data']['summary']} (exit {code})")
    return code


if __name__ == "__main__":
    sys.exit(main())
