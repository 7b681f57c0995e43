"""JSON input dialects for the four job kinds, with exact rational literals.

Rationals are JSON integers or strings such as "-3/2" (a Unicode minus is
accepted).  JSON floats are rejected outright.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

import jsonschema

from .errors import SchemaError, TcoxError
from .klyachko import BundleRay, Rank2BundleData
from .orlik_wagreich import ContractionSpec, OWArm, OWGraph
from .pdiv import DivisorialFanP1, P1Point, PolyhedralDivisorP1
from .polyhedra import Cone, SigmaPolyhedron

KINDS = ("fan", "owgraph", "bundle", "cotangent")


class _FloatLiteral:
    """Placeholder for a JSON float so that schema validation can point at it."""

    def __init__(self, text):
        self.text = text

    def __repr__(self):
        return self.text


_RAT_RE = r"^\s*[-+−]?\s*\d+\s*(/\s*\d+\s*)?$"

RATIONAL = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": _RAT_RE}]}
INT = {"type": "integer"}
POINT = {
    "type": "object",
    "properties": {"name": {"type": "string"}, "b": RATIONAL, "c": RATIONAL},
    "required": ["b", "c"],
    "additionalProperties": False,
}
RAT_VECTOR = {"type": "array", "items": RATIONAL}
INT_VECTOR = {"type": "array", "items": INT, "minItems": 1}
COMBO = {"type": "object", "additionalProperties": INT}

SCHEMAS = {
    "fan": {
        "type": "object",
        "properties": {
            "kind": {"const": "fan"},
            "name": {"type": "string"},
            "ambient_rank": {"type": "integer", "minimum": 1},
            "points": {"type": "array", "items": POINT},
            "divisors": {
                "type": "array", "minItems": 1,
                "items": {
                    "type": "object",
                    "properties": {
                        "name": {"type": "string"},
                        "tail": {"type": "array", "items": INT_VECTOR},
                        "coefficients": {
                            "type": "object",
                            "additionalProperties": {
                                "oneOf": [
                                    {"const": "empty"},
                                    {"type": "object",
                                     "properties": {"vertices": {"type": "array", "minItems": 1, "items": RAT_VECTOR}},
                                     "required": ["vertices"], "additionalProperties": False},
                                ]
                            },
                        },
                    },
                    "required": ["tail"],
                    "additionalProperties": False,
                },
            },
            "basis": {
                "type": "object",
                "properties": {
                    "free": {"type": "array", "items": COMBO},
                    "torsion": {"type": "array", "items": {
                        "type": "object",
                        "properties": {"combo": COMBO, "order": {"type": "integer", "minimum": 2}},
                        "required": ["combo", "order"], "additionalProperties": False}},
                },
                "additionalProperties": False,
            },
            "syzygy_basis": {"enum": ["trinomial", "saturated"]},
    },
        "required": ["kind", "ambient_rank", "divisors"],
        "additionalProperties": False,
    },
    "owgraph": {
        "type": "object",
        "properties": {
            "kind": {"const": "owgraph"},
            "name": {"type": "string"},
            "arms": {"type": "array", "minItems": 1, "items": {
                "type": "object",
                "properties": {"point": POINT, "b": {"type": "array", "items": INT, "minItems": 1}},
                "required": ["point", "b"], "additionalProperties": False}},
            "c_plus": INT,
            "c_minus": INT,
            "exceptional": {"type": "array", "items": {"type": "string"}},
    },
        "required": ["kind", "arms"],
        "additionalProperties": False,
    },
    "bundle": {
        "type": "object",
        "properties": {
            "kind": {"const": "bundle"},
            "name": {"type": "string"},
            "ambient_rank": {"type": "integer", "minimum": 1},
            "smooth": {"type": "boolean"},
            "rays": {"type": "array", "minItems": 1, "items": {
                "type": "object",
                "properties": {"v": INT_VECTOR, "i0": INT, "i1": INT, "line": POINT},
                "required": ["v", "i0", "i1"], "additionalProperties": False}},
    },
        "required": ["kind", "ambient_rank", "rays"],
        "additionalProperties": False,
    },
    "cotangent": {
        "type": "object",
        "properties": {
            "kind": {"const": "cotangent"},
            "name": {"type": "string"},
            "smooth": {"type": "boolean"},
            "rays": {"type": "array", "minItems": 2, "items": INT_VECTOR},
    },
        "required": ["kind", "rays"],
        "additionalProperties": False,
    },
}


def parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise SchemaError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str) and re.match(_RAT_RE, x):
        s = x.replace("−", "-").replace(" ", "")
        try:
            return Fraction(s)
        except ZeroDivisionError:
            raise SchemaError(f"zero denominator in {x!r}") from None
    raise SchemaError(f"not an exact rational literal: {x!r}")


def format_rational(q) -> int | str:
    q = Fraction(q)
    return int(q) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class FanJob:
    fan: DivisorialFanP1
    basis: Mapping | None = None
    syzygy_basis: str = "trinomial"


@dataclass(frozen=True)
class OWJob:
    graph: OWGraph
    contraction: ContractionSpec | None = None


@dataclass(frozen=True)
class BundleJob:
    data: Rank2BundleData
    smooth: bool = True


@dataclass(frozen=True)
class CotangentJob:
    rays: tuple[tuple[int, ...], ...]
    smooth: bool = True


@dataclass(frozen=True)
class JobSpec:
    kind: str
    payload: Any
    name: str = ""
    options: Mapping = field(default_factory=dict)


def _fmt_path(path) -> str:
    return "/".join(str(p) for p in path) or "<root>"


def load_json(data: bytes | str) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise SchemaError(f"input is not UTF-8: {e}") from None
    try:
        return json.loads(data, parse_float=_FloatLiteral)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None


def validate(doc: Any, kind: str | None = None) -> str:
    if not isinstance(doc, dict):
        raise SchemaError("top level must be a JSON object")
    kind = kind or doc.get("kind")
    if kind not in SCHEMAS:
        raise SchemaError(f"unknown or missing job kind {kind!r}; expected one of {', '.join(KINDS)}", "kind")
    if doc.get("kind", kind) != kind:
        raise SchemaError(f"document kind {doc.get('kind')!r} does not match command {kind!r}", "kind")
    doc.setdefault("kind", kind)
    validator = jsonschema.Draft202012Validator(SCHEMAS[kind])
    e = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if e is not None:
        bad = e.instance
        msg = e.message
        # for oneOf failures report the innermost mismatch and flag floats explicitly
        if isinstance(bad, _FloatLiteral):
            msg = f"floating-point literal {bad.text} is not allowed; write rationals as strings like \"3/2\""
        raise SchemaError(msg, _fmt_path(e.absolute_path))
    return kind


def _point(d, path) -> P1Point:
    try:
        return P1Point(parse_rational(d["b"]), parse_rational(d["c"]), d.get("name"))
    except ValueError as e:
        raise SchemaError(str(e), path) from None


def _fan_payload(doc) -> FanJob:
    n = doc["ambient_rank"]
    pts = []
    by_name = {}
    for k, p in enumerate(doc.get("points", [])):
        pt = _point(p, f"points/{k}")
        name = p.get("name", str(k))
        if name in by_name:
            raise SchemaError(f"duplicate point name {name!r}", f"points/{k}/name")
        by_name[name] = pt
        pts.append(pt)
    divs = []
    for i, d in enumerate(doc["divisors"]):
        path = f"divisors/{i}"
        for j, r in enumerate(d["tail"]):
            if len(r) != n:
                raise SchemaError(f"tail generator has length {len(r)}, expected {n}", f"{path}/tail/{j}")
        try:
            tail = Cone.from_generators(d["tail"], n)
        except ValueError as e:
            raise SchemaError(str(e), f"{path}/tail") from None
        if not tail.is_pointed:
            raise SchemaError("tail cone is not pointed", f"{path}/tail")
        coeffs = []
        for pname, c in d.get("coefficients", {}).items():
            cpath = f"{path}/coefficients/{pname}"
            if pname not in by_name:
                raise SchemaError(f"unknown point {pname!r}", cpath)
            if c == "empty":
                poly = SigmaPolyhedron.empty(n)
            else:
                verts = []
                for k, v in enumerate(c["vertices"]):
                    if len(v) != n:
                        raise SchemaError(f"vertex has length {len(v)}, expected {n}", f"{cpath}/vertices/{k}")
                    verts.append(tuple(parse_rational(x) for x in v))
                poly = SigmaPolyhedron.make(verts, tail)
            coeffs.append((by_name[pname], poly))
        try:
            divs.append(PolyhedralDivisorP1(tail, tuple(coeffs), d.get("name", f"D{i + 1}")))
        except TcoxError as e:
            raise SchemaError(str(e), path) from None
    basis = None
    if "basis" in doc:
        b = doc["basis"]
        basis = {"free": [dict(c) for c in b.get("free", [])],
                 "torsion": [(dict(t["combo"]), t["order"]) for t in b.get("torsion", [])]}
    try:
        fan = DivisorialFanP1(tuple(divs), tuple(pts))
    except TcoxError as e:
        raise SchemaError(str(e), "divisors") from None
    return FanJob(fan, basis, doc.get("syzygy_basis", "trinomial"))


def _ow_payload(doc) -> OWJob:
    arms = []
    for i, a in enumerate(doc["arms"]):
        arms.append(OWArm(_point(a["point"], f"arms/{i}/point"), tuple(a["b"])))
    try:
        g = OWGraph(tuple(arms), doc.get("c_plus"), doc.get("c_minus"))
    except TcoxError as e:
        raise SchemaError(str(e), "arms") from None
    spec = ContractionSpec(frozenset(doc["exceptional"])) if "exceptional" in doc else None
    return OWJob(g, spec)


def _bundle_payload(doc) -> BundleJob:
    n = doc["ambient_rank"]
    rays = []
    for i, r in enumerate(doc["rays"]):
        path = f"rays/{i}"
        if len(r["v"]) != n:
            raise SchemaError(f"ray has length {len(r['v'])}, expected {n}", f"{path}/v")
        line = _point(r["line"], f"{path}/line") if "line" in r else None
        try:
            rays.append(BundleRay(tuple(r["v"]), r["i0"], r["i1"], line))
        except TcoxError as e:
            raise SchemaError(str(e), path) from None
    try:
        data = Rank2BundleData(n, tuple(rays))
    except TcoxError as e:
        raise SchemaError(str(e), "rays") from None
    return BundleJob(data, doc.get("smooth", True))


def _cotangent_payload(doc) -> CotangentJob:
    rays = tuple(tuple(r) for r in doc["rays"])
    n = len(rays[0])
    for i, r in enumerate(rays):
        if len(r) != n:
            raise SchemaError(f"ray has length {len(r)}, expected {n}", f"rays/{i}")
    return CotangentJob(rays, doc.get("smooth", True))


_BUILDERS = {"fan": _fan_payload, "owgraph": _ow_payload, "bundle": _bundle_payload, "cotangent": _cotangent_payload}


def parse_document(doc: Any, kind: str | None = None) -> JobSpec:
    kind = validate(doc, kind)
    return JobSpec(kind, _BUILDERS[kind](doc), doc.get("name", ""))


def parse_input(data: bytes | str, kind: str | None = None) -> JobSpec:
    return parse_document(load_json(data), kind)


# -- serialization -------------------------------------------------------------

def _point_doc(p: P1Point, with_name=True) -> dict:
    d = {"b": format_rational(p.b), "c": format_rational(p.c)}
    if with_name and p.name is not None:
        d["name"] = p.name
    return d


def serialize_job(job: JobSpec) -> dict:
    p = job.payload
    doc: dict = {"kind": job.kind}
    if job.name:
        doc["name"] = job.name
    if job.kind == "fan":
        fan = p.fan
        names = {}
        pts = []
        for k, pt in enumerate(fan.points):
            name = pt.name if pt.name is not None else f"p{k}"
            names[pt] = name
            pts.append({"name": name, "b": format_rational(pt.b), "c": format_rational(pt.c)})
        doc["ambient_rank"] = fan.ambient_rank
        doc["points"] = pts
        divs = []
        for D in fan.divisors:
            coeffs = {}
            for pt, poly in D.coefficients:
                coeffs[names[pt]] = "empty" if poly.is_empty else {
                    "vertices": [[format_rational(x) for x in v] for v in poly.vertices]}
            dd = {"tail": [list(r) for r in D.tail.rays], "coefficients": coeffs}
            if D.name:
                dd["name"] = D.name
            divs.append(dd)
        doc["divisors"] = divs
        if p.basis is not None:
            doc["basis"] = {"free": [dict(c) for c in p.basis.get("free", [])],
                            "torsion": [{"combo": dict(c), "order": o} for c, o in p.basis.get("torsion", [])]}
        doc["syzygy_basis"] = p.syzygy_basis
    elif job.kind == "owgraph":
        g = p.graph
        doc["arms"] = [{"point": _point_doc(a.point), "b": list(a.b)} for a in g.arms]
        if g.c_plus is not None:
            doc["c_plus"] = g.c_plus
        if g.c_minus is not None:
            doc["c_minus"] = g.c_minus
        if p.contraction is not None:
            doc["exceptional"] = sorted(p.contraction.exceptional_labels)
    elif job.kind == "bundle":
        d = p.data
        doc["ambient_rank"] = d.ambient_rank
        doc["smooth"] = p.smooth
        rays = []
        for r in d.rays:
            rr = {"v": list(r.v), "i0": r.i0, "i1": r.i1}
            if r.line is not None:
                rr["line"] = _point_doc(r.line)
            rays.append(rr)
        doc["rays"] = rays
    elif job.kind == "cotangent":
        doc["rays"] = [list(r) for r in p.rays]
        doc["smooth"] = p.smooth
    return doc
