"""JSON codecs for witnesses, curves and reports.

Scalars are written as:
- ℚ: "num/den"
- quadratic elements: {"a", "b", "alg"}
- cyclotomic elements: {"p", "rep"}
- the point at infinity: ["inf", "+"]

Every decode failure is a ParseError carrying the JSON location.
"""

from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Type, TypeVar, Union
import logging
import os
import tempfile

from pydantic import BaseModel, ValidationError

from .algebra import CycloElem, QuadElem
from .base import ParseError
from .composite import CompositeWitness, _field_of, check_pte
from .curves import INFINITY, CurveSpec, ExpectedCounts
from .fields import QQ, format_rational, parse_rational
from .models import CurveDocument, ExpectedDocument, WitnessDocument
from .poly import Poly

logger = logging.getLogger(__name__)

DocT = TypeVar("DocT", bound=BaseModel)


def encode_value(value: Any) -> Any:
    if isinstance(value, bool):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (QuadElem, CycloElem)):
        return value.to_json()
    if isinstance(value, (list, tuple)):
        return [encode_value(v) for v in value]
    return value


def decode_value(raw: Any, location: str) -> Any:
    """Inverse of encode_value; strings are rationals, dicts are algebra elements."""
    if isinstance(raw, str):
        return parse_rational(raw, location)
    if isinstance(raw, dict):
        if "alg" in raw:
            return QuadElem.from_json(raw, location)
        return CycloElem.from_json(raw, location)
    if isinstance(raw, list):
        return [decode_value(v, f"{location}[{i}]") for i, v in enumerate(raw)]
    if isinstance(raw, int) and not isinstance(raw, bool):
        return raw
    raise ParseError(f"Unexpected value at {location}: {raw!r}", {"location": location})


def _encode_point(point: Any) -> Any:
    if point == INFINITY:
        return list(INFINITY)
    return [encode_value(c) for c in point]


def _decode_point(raw: Any, location: str) -> Any:
    if raw == list(INFINITY):
        return INFINITY
    if not isinstance(raw, list) or len(raw) != 2:
        raise ParseError(f"Expected an [x, y] pair at {location}", {"location": location})
    return tuple(decode_value(c, f"{location}[{i}]") for i, c in enumerate(raw))


# Witnesses


def witness_to_document(witness: CompositeWitness, pte: Optional[bool] = None) -> WitnessDocument:
    return WitnessDocument(
        family=witness.kind,
        n=witness.n,
        roots=encode_value(list(witness.roots)),
        inner=witness.inner.to_json(),
        outer=witness.outer.to_json(),
        aux={key: encode_value(value) for key, value in witness.aux.items()},
        seed=witness.seed,
        pte=pte,
    )


def witness_from_document(doc: WitnessDocument, location: str = "witness") -> CompositeWitness:
    roots = tuple(decode_value(r, f"{location}.roots[{i}]") for i, r in enumerate(doc.roots))
    poly_field = _field_of(roots[0]) if doc.family == "blocks" and roots else QQ
    aux: Dict[str, Any] = {key: decode_value(value, f"{location}.aux.{key}") for key, value in doc.aux.items()}
    return CompositeWitness(
        kind=doc.family,
        n=doc.n,
        roots=roots,
        inner=Poly.from_json(poly_field, doc.inner, f"{location}.inner"),
        outer=Poly.from_json(poly_field, doc.outer, f"{location}.outer"),
        aux=aux,
        seed=doc.seed,
    )


def witness_pte(witness: CompositeWitness) -> bool:
    return check_pte(witness.blocks())


# Curves


def curve_to_document(curve: CurveSpec) -> CurveDocument:
    expected = None
    if curve.expected is not None:
        expected = ExpectedDocument(**curve.expected._asdict())
    return CurveDocument(
        family=curve.family,
        d=curve.d,
        f=curve.f.to_json(),
        genus=curve.genus,
        points=[_encode_point(pt) for pt in curve.points],
        labels=list(curve.labels),
        h=curve.h.to_json(),
        l=curve.l.to_json(),
        inner=curve.inner.to_json(),
        expected=expected,
        witness=witness_to_document(curve.witness),
    )


def curve_from_document(doc: CurveDocument) -> CurveSpec:
    """Rebuild a CurveSpec exactly as stored; nothing is recomputed."""
    expected = None
    if doc.expected is not None:
        expected = ExpectedCounts(doc.expected.genus, doc.expected.N, doc.expected.R)
    return CurveSpec(
        family=doc.family,
        d=doc.d,
        f=Poly.from_json(QQ, doc.f, "f"),
        genus=doc.genus,
        points=tuple(_decode_point(pt, f"points[{i}]") for i, pt in enumerate(doc.points)),
        labels=tuple(doc.labels),
        h=Poly.from_json(QQ, doc.h, "h"),
        l=Poly.from_json(QQ, doc.l, "l"),
        inner=Poly.from_json(QQ, doc.inner, "inner"),
        witness=witness_from_document(doc.witness),
        expected=expected,
    )


# Files


def parse_document(text: str, model: Type[DocT], source: str = "<input>") -> DocT:
    """Validate JSON text against a document model.

    Raises:
        ParseError: Malformed JSON or schema violation, with its location
    """
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "$"
        raise ParseError(
            f"Invalid {model.__name__} in {source} at {location}: {first['msg']}",
            {"location": f"{source}:{location}"},
        )


def read_document(path: Union[str, Path], model: Type[DocT]) -> DocT:
    """Read and validate a JSON document; read failures surface as ParseError."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(f"Cannot read {path}: {e.strerror}", {"location": str(path)})
    return parse_document(text, model, str(path))


def read_curve(path: Union[str, Path]) -> CurveSpec:
    return curve_from_document(read_document(path, CurveDocument))


def dump_document(doc: BaseModel) -> str:
    return doc.model_dump_json(indent=2) + "\n"


def write_atomic(path: Union[str, Path], text: str) -> Path:
    """Write via a temporary file in the target directory and rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.debug(f"Wrote {path}")
    return path


def write_document(path: Union[str, Path], doc: BaseModel) -> Path:
    return write_atomic(path, dump_document(doc))
