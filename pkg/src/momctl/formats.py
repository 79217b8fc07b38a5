"""JSON documents for matrices, vectors, plans, witnesses and reports.

Rationals are always written as strings (``"3/2"``, ``"-1"``, ``"0"``);
plain JSON integers are accepted on input.  Every ``*_to_doc`` has a
``*_from_doc`` inverse with ``from_doc(to_doc(x)) == x``.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .embeddings import (
    CONSTRUCTIONS,
    DISCRETE,
    FRECHET,
    ONE_POINT,
    BoundedVector,
    EmbeddingWitness,
    TruncationPlan,
    default_names,
)
from .metric import MetricMatrix, StructuralError, ValidationReport, Violation, as_rat
from .oracle import IsometryReport, WorstPair


class FormatError(StructuralError):
    """A document does not follow the expected layout."""


def rat(x: Fraction) -> str:
    return str(x)


def _get(doc, key, kind=None):
    if not isinstance(doc, dict):
        raise FormatError(f"expected an object, got {type(doc).__name__}")
    if key not in doc:
        raise FormatError(f"missing field {key!r}")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise FormatError(f"field {key!r} has the wrong type")
    return value


def matrix_to_doc(m: MetricMatrix) -> dict:
    return {
        "labels": list(m.labels),
        "kind": m.kind,
        "entries": [[rat(v) for v in row] for row in m.entries],
    }


def matrix_from_doc(doc) -> MetricMatrix:
    labels = _get(doc, "labels", list)
    if not all(isinstance(x, str) for x in labels):
        raise FormatError("labels must be strings")
    entries = _get(doc, "entries", list)
    if not all(isinstance(row, list) for row in entries):
        raise FormatError("entries must be an array of arrays")
    return MetricMatrix(tuple(labels), tuple(tuple(row) for row in entries), doc.get("kind", "metric"))


def vector_to_doc(v: BoundedVector) -> dict:
    return {"values": [rat(x) for x in v.values], "bound": rat(v.bound)}


def vector_from_doc(doc) -> BoundedVector:
    values = _get(doc, "values", list)
    bound = doc.get("bound")
    return BoundedVector(tuple(values), None if bound is None else as_rat(bound))


def family_to_doc(vectors, names=None) -> dict:
    names = default_names(len(vectors)) if names is None else names
    return {"vectors": [{"name": k, **vector_to_doc(v)} for k, v in zip(names, vectors)]}


def family_from_doc(doc) -> tuple[tuple[str, ...], tuple[BoundedVector, ...]]:
    items = _get(doc, "vectors", list)
    if not items:
        raise FormatError("vector family is empty")
    vectors = tuple(vector_from_doc(item) for item in items)
    names = tuple(str(item.get("name", f"f{k}")) for k, item in enumerate(items))
    if len(set(names)) != len(names):
        raise FormatError("duplicate vector names")
    return names, vectors


def plan_to_doc(plan: TruncationPlan) -> dict:
    return {
        "M": plan.M,
        "N": plan.N,
        "block_sizes": list(plan.block_sizes),
        "blocks": [list(b) for b in plan.blocks],
        "pairings": [[[p, q, s] for (p, q), s in pairing] for pairing in plan.pairings],
    }


def plan_from_doc(doc) -> TruncationPlan:
    try:
        pairings = tuple(
            tuple(((str(p), str(q)), int(s)) for p, q, s in pairing)
            for pairing in _get(doc, "pairings", list)
        )
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad pairing table: {exc}") from exc
    return TruncationPlan(
        int(_get(doc, "M", int)),
        int(_get(doc, "N", int)),
        tuple(int(x) for x in _get(doc, "block_sizes", list)),
        tuple(tuple(str(x) for x in b) for b in _get(doc, "blocks", list)),
        pairings,
    )


def _provenance_to_doc(construction: str, prov: dict) -> dict:
    if construction == FRECHET:
        return {"order": list(prov["order"])}
    if construction == ONE_POINT:
        return {"pt": prov["pt"], "constant": rat(prov["constant"])}
    if construction == DISCRETE:
        return {"plan": plan_to_doc(prov["plan"])}
    return {
        "M": prov["M"],
        "shifted": prov["shifted"],
        "lower": vector_to_doc(prov["lower"]),
        "shift": vector_to_doc(prov["shift"]),
        "upper": vector_to_doc(prov["upper"]),
    }


def _provenance_from_doc(construction: str, doc) -> dict:
    if construction == FRECHET:
        return {"order": tuple(_get(doc, "order", list))}
    if construction == ONE_POINT:
        return {"pt": _get(doc, "pt", str), "constant": as_rat(_get(doc, "constant"))}
    if construction == DISCRETE:
        return {"plan": plan_from_doc(_get(doc, "plan"))}
    return {
        "M": _get(doc, "M", int),
        "shifted": _get(doc, "shifted", bool),
        "lower": vector_from_doc(_get(doc, "lower")),
        "shift": vector_from_doc(_get(doc, "shift")),
        "upper": vector_from_doc(_get(doc, "upper")),
    }


def witness_to_doc(w: EmbeddingWitness) -> dict:
    if isinstance(w.source, MetricMatrix):
        source = matrix_to_doc(w.source)
    else:
        source = family_to_doc(w.source, w.points)
    outputs = [
        matrix_to_doc(o) if isinstance(o, MetricMatrix) else vector_to_doc(o) for o in w.outputs
    ]
    return {
        "construction": w.construction,
        "points": list(w.points),
        "input": source,
        "provenance": _provenance_to_doc(w.construction, w.provenance),
        "outputs": outputs,
    }


def witness_from_doc(doc) -> EmbeddingWitness:
    construction = _get(doc, "construction", str)
    if construction not in CONSTRUCTIONS:
        raise FormatError(f"unknown construction {construction!r}")
    src = _get(doc, "input", dict)
    source = matrix_from_doc(src) if construction in (FRECHET, ONE_POINT) else family_from_doc(src)[1]
    read = vector_from_doc if construction == FRECHET else matrix_from_doc
    return EmbeddingWitness(
        construction,
        source,
        tuple(_get(doc, "points", list)),
        tuple(read(o) for o in _get(doc, "outputs", list)),
        _provenance_from_doc(construction, _get(doc, "provenance", dict)),
    )


def validation_to_doc(report: ValidationReport) -> dict:
    return {
        "ok": report.ok,
        "violations": [
            {"axiom": v.axiom, "where": list(v.where), "lhs": rat(v.lhs), "rhs": rat(v.rhs)}
            for v in report.violations
        ],
    }


def validation_from_doc(doc) -> ValidationReport:
    return ValidationReport(
        tuple(
            Violation(v["axiom"], tuple(v["where"]), as_rat(v["lhs"]), as_rat(v["rhs"]))
            for v in _get(doc, "violations", list)
        )
    )


def isometry_to_doc(report: IsometryReport) -> dict:
    worst = report.worst
    return {
        "ok": report.ok,
        "distortion": rat(report.distortion),
        "worst_pair": None
        if worst is None
        else {"u": worst.u, "v": worst.v, "claimed": rat(worst.claimed), "achieved": rat(worst.achieved)},
        "pairs_checked": report.pairs_checked,
    }


def isometry_from_doc(doc) -> IsometryReport:
    wp = doc.get("worst_pair")
    worst = None if wp is None else WorstPair(wp["u"], wp["v"], as_rat(wp["claimed"]), as_rat(wp["achieved"]))
    return IsometryReport(as_rat(_get(doc, "distortion")), worst, int(doc.get("pairs_checked", 0)))


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from exc


def read_doc(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def write_doc(path, doc: dict) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def read_original(path):
    """A metric matrix or a vector family, whichever the file holds."""
    doc = read_doc(path)
    if isinstance(doc, dict) and "vectors" in doc:
        return family_from_doc(doc)[1]
    return matrix_from_doc(doc)
