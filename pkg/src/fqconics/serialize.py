"""Versioned JSON encodings for polynomials, conics, witnessed sets and trace reports.

Every document carries ``"schema": 1``. Field elements use the field's own
text encoding (an int for prime fields, a coefficient list otherwise), and
key order plus list order are fixed so identical objects give identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .conics import ELLIPSE, Conic, ellipse_from_solution
from .constructions import WitnessedSet, Witness
from .field import FieldCtx, FieldError, is_irreducible, is_prime, make_field
from .poly import MultiPoly
from .proofs import TraceReport

SCHEMA = 1


class SchemaError(ValueError):
    pass


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _need(doc: dict, key: str, kind=None):
    if not isinstance(doc, dict):
        raise SchemaError(f"expected an object holding {key!r}")
    if key not in doc:
        raise SchemaError(f"missing field {key!r}")
    val = doc[key]
    if kind is not None and (not isinstance(val, kind) or (kind is int and isinstance(val, bool))):
        raise SchemaError(f"field {key!r} has the wrong type")
    return val


def _check_schema(doc: dict, type_name: str) -> None:
    if _need(doc, "schema") != SCHEMA:
        raise SchemaError(f"field 'schema' must be {SCHEMA}")
    if _need(doc, "type") != type_name:
        raise SchemaError(f"field 'type' must be {type_name!r}")


# -- fields


def field_header(F: FieldCtx) -> dict:
    return {"q": F.q, "p": F.p, "k": F.k, "modulus": list(F.modulus)}


def field_from_header(doc: dict) -> FieldCtx:
    p, k, q = _need(doc, "p", int), _need(doc, "k", int), _need(doc, "q", int)
    modulus = tuple(_need(doc, "modulus", list))
    if not is_prime(p) or k < 1 or p**k != q:
        raise SchemaError("field 'q' does not match p**k")
    try:
        F = make_field(p, k)
    except FieldError as e:
        raise SchemaError(f"field 'p': {e}") from None
    if F.modulus == modulus:
        return F
    if len(modulus) != k + 1 or modulus[-1] != 1 or not is_irreducible(modulus, p):
        raise SchemaError("field 'modulus' is not a monic irreducible of degree k")
    return FieldCtx(p, k, modulus)


def _vec(F, v) -> list:
    return [F.encode(x) for x in v]


def _unvec(F, obj, name: str) -> tuple[int, ...]:
    if not isinstance(obj, list):
        raise SchemaError(f"field {name!r} must be a list")
    try:
        return tuple(F.decode(x) for x in obj)
    except FieldError as e:
        raise SchemaError(f"field {name!r}: {e}") from None


# -- polynomials


def poly_body(f: MultiPoly) -> dict:
    return {
        "n": f.n,
        "terms": [{"exp": list(e), "coeff": f.field.encode(c)} for e, c in f.sorted_terms()],
    }


def poly_from_body(F, doc: dict) -> MultiPoly:
    n = _need(doc, "n", int)
    terms = {}
    for t in _need(doc, "terms", list):
        exp = tuple(_need(t, "exp", list))
        if len(exp) != n or any(not isinstance(e, int) or e < 0 for e in exp):
            raise SchemaError("field 'exp' is not a valid exponent vector")
        if exp in terms:
            raise SchemaError(f"field 'terms' repeats exponent {list(exp)}")
        terms[exp] = _unvec(F, [_need(t, "coeff")], "coeff")[0]
    if any(c == 0 for c in terms.values()):
        raise SchemaError("field 'coeff' must be nonzero")
    return MultiPoly(F, n, terms)


def poly_to_json(f: MultiPoly) -> dict:
    return {"schema": SCHEMA, "type": "polynomial", "field": field_header(f.field), **poly_body(f)}


def poly_from_json(doc: dict) -> MultiPoly:
    _check_schema(doc, "polynomial")
    return poly_from_body(field_from_header(_need(doc, "field", dict)), doc)


# -- conics


def conic_body(C: Conic) -> dict:
    F = C.field
    out = {"kind": C.kind, "a": _vec(F, C.a), "b": _vec(F, C.b), "c": _vec(F, C.c)}
    if C.ellipse is not None:
        e = C.ellipse
        out["ellipse"] = {k: F.encode(getattr(e, k)) for k in ("g", "k", "u", "v")}
    return out


def conic_from_body(F, doc: dict) -> Conic:
    kind = _need(doc, "kind", str)
    vecs = [_unvec(F, _need(doc, key), key) for key in ("a", "b", "c")]
    param = None
    if kind == ELLIPSE:
        e = _need(doc, "ellipse", dict)
        g, k, u, v = (_unvec(F, [_need(e, key)], key)[0] for key in ("g", "k", "u", "v"))
        try:
            param = ellipse_from_solution(F, g, k, u, v)
        except (ValueError, FieldError) as err:
            raise SchemaError(f"field 'ellipse': {err}") from None
    elif "ellipse" in doc:
        raise SchemaError("field 'ellipse' is only allowed on ellipses")
    try:
        return Conic(F, kind, *vecs, ellipse=param)
    except ValueError as err:
        raise SchemaError(f"field 'kind': {err}") from None


def conic_to_json(C: Conic) -> dict:
    return {"schema": SCHEMA, "type": "conic", "field": field_header(C.field), **conic_body(C)}


def conic_from_json(doc: dict) -> Conic:
    _check_schema(doc, "conic")
    return conic_from_body(field_from_header(_need(doc, "field", dict)), doc)


# -- witnessed sets


def _plain(obj: Any) -> Any:
    """Make meta values JSON-safe and deterministic."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_plain(v) for v in obj)
    return obj


def set_to_json(W: WitnessedSet) -> dict:
    F = W.field
    return {
        "schema": SCHEMA,
        "type": "witnessed-set",
        **field_header(F),
        "n": W.n,
        "points": [_vec(F, p) for p in sorted(W.points)],
        "witnesses": [{"key": _vec(F, w.key), "role": w.role, "conic": conic_body(w.conic)} for w in W.witnesses],
        "provenance": W.provenance,
        "meta": _plain(W.meta),
    }


def set_from_json(doc: dict) -> WitnessedSet:
    _check_schema(doc, "witnessed-set")
    F = field_from_header(doc)
    n = _need(doc, "n", int)
    pts = [_unvec(F, p, "points") for p in _need(doc, "points", list)]
    if any(len(p) != n for p in pts):
        raise SchemaError(f"field 'points' holds a point not of length {n}")
    witnesses = []
    for w in _need(doc, "witnesses", list):
        key = _unvec(F, _need(w, "key"), "key")
        witnesses.append(Witness(key, _need(w, "role", str), conic_from_body(F, _need(w, "conic", dict))))
    try:
        W = WitnessedSet(F, n, frozenset(pts), witnesses, doc.get("provenance", ""), doc.get("meta", {}))
    except ValueError as err:
        raise SchemaError(f"field 'witnesses': {err}") from None
    return W


# -- traces


def _frac(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, TypeError):
        raise SchemaError("field 'threshold' is not a rational") from None


def trace_to_json(R: TraceReport, F: FieldCtx) -> dict:
    return {
        "schema": SCHEMA,
        "type": "trace",
        "field": field_header(F),
        "mode": R.mode,
        "q": R.q,
        "n": R.n,
        "size": R.size,
        "degree": R.degree,
        "bound": R.degree_bound,
        "threshold": str(R.threshold),
        "status": R.status,
        "message": R.message,
        "multiplicity": R.multiplicity,
        "polynomial": poly_body(R.polynomial) if R.polynomial is not None else None,
        "records": _plain(R.records),
        "covered": R.covered,
        "required": R.required,
        "contradiction": R.contradiction,
        "bounds": _plain(R.bounds),
    }


def trace_from_json(doc: dict) -> TraceReport:
    _check_schema(doc, "trace")
    F = field_from_header(_need(doc, "field", dict))
    poly = doc.get("polynomial")
    return TraceReport(
        mode=_need(doc, "mode", str),
        q=_need(doc, "q", int),
        n=_need(doc, "n", int),
        size=_need(doc, "size", int),
        degree=doc.get("degree"),
        degree_bound=_need(doc, "bound", int),
        threshold=_frac(_need(doc, "threshold", str)),
        status=_need(doc, "status", str),
        message=_need(doc, "message", str),
        multiplicity=doc.get("multiplicity"),
        polynomial=poly_from_body(F, poly) if poly is not None else None,
        records=_need(doc, "records", list),
        covered=_need(doc, "covered", int),
        required=_need(doc, "required", int),
        contradiction=_need(doc, "contradiction", bool),
        bounds=doc.get("bounds", {}),
    )


def load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path} is not valid JSON: {e.msg}") from None


def save(path: str, doc: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(doc))
