"""Instance and witness files, and JSON rendering of results.

Instance files are JSON with exact rational literals ("p" or "p/q"
strings; binary floats are rejected). One file describes one instance:
the ordered space, the labeled points, the metric (an explicit table or
one of the closed-form generators), plus optional queries and an
optional embedding for the linear-independence census.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .approximation import ApproximationResult, FORWARD, Query
from .chebyshev import ChebyshevReport
from .cones import OrderedSpace, PolyhedralCone, Vec, as_rational, format_rational
from .errors import InstanceFileError, NotARational
from .metric import (
    ALPHA_METRIC,
    DIRECTION_METRIC,
    EXPLICIT_TABLE,
    Label,
    QcmInstance,
    build_example3,
    build_example4,
)
from .reports import AxiomReport
from .witnesses import WitnessTable, WitnessVerdict


@dataclass
class LoadedInstance:
    instance: QcmInstance
    queries: list[Query]
    embedding: dict[Label, Vec] | None


def _fail(where: str, message: str) -> "InstanceFileError":
    return InstanceFileError(f"{where}: {message}")


def _rational(value, where: str) -> Fraction:
    if isinstance(value, float):
        raise _fail(where, f"{value!r} is a binary float; write an exact literal like \"3/4\"")
    try:
        return as_rational(value)
    except NotARational as exc:
        raise _fail(where, str(exc)) from None


def _vec(value, where: str, dimension: int | None = None) -> Vec:
    if not isinstance(value, list):
        raise _fail(where, f"expected an array of rational literals, got {type(value).__name__}")
    coords = tuple(_rational(c, f"{where}[{i}]") for i, c in enumerate(value))
    if dimension is not None and len(coords) != dimension:
        raise _fail(where, f"expected {dimension} coordinates, got {len(coords)}")
    return Vec(coords)


def _require(doc: dict, key: str, where: str):
    if key not in doc:
        raise _fail(where, f"missing required field {key!r}")
    return doc[key]


def parse_space(doc, where: str = "space") -> OrderedSpace:
    if not isinstance(doc, dict):
        raise _fail(where, "expected an object with 'dimension' and 'rows'")
    dimension = _require(doc, "dimension", where)
    if not isinstance(dimension, int) or dimension < 1:
        raise _fail(f"{where}.dimension", f"expected a positive integer, got {dimension!r}")
    rows_doc = _require(doc, "rows", where)
    if not isinstance(rows_doc, list) or not rows_doc:
        raise _fail(f"{where}.rows", "expected a nonempty array of constraint rows")
    rows = tuple(
        _vec(row, f"{where}.rows[{i}]", dimension) for i, row in enumerate(rows_doc)
    )
    interior = doc.get("interior_point")
    if interior is not None:
        interior = _vec(interior, f"{where}.interior_point", dimension)
    try:
        cone = PolyhedralCone(dimension, rows, interior)
        return OrderedSpace(dimension, cone)
    except ValueError as exc:
        raise _fail(where, str(exc)) from None


def _parse_points(doc, where: str = "points") -> list[tuple[Label, Fraction | None]]:
    if not isinstance(doc, list) or not doc:
        raise _fail(where, "expected a nonempty array of points")
    points = []
    for i, entry in enumerate(doc):
        spot = f"{where}[{i}]"
        if isinstance(entry, str):
            points.append((entry, None))
        elif isinstance(entry, dict):
            label = _require(entry, "label", spot)
            if not isinstance(label, str):
                raise _fail(f"{spot}.label", "labels must be strings")
            coordinate = entry.get("coordinate")
            if coordinate is not None:
                coordinate = _rational(coordinate, f"{spot}.coordinate")
            points.append((label, coordinate))
        else:
            raise _fail(spot, "expected a label string or an object with 'label'")
    return points


def parse_instance(doc: dict) -> LoadedInstance:
    if not isinstance(doc, dict):
        raise InstanceFileError("top level: expected a JSON object")
    points = _parse_points(_require(doc, "points", "top level"))
    labels = [label for label, _ in points]
    metric = _require(doc, "metric", "top level")
    if not isinstance(metric, dict):
        raise _fail("metric", "expected an object with a 'kind'")
    kind = _require(metric, "kind", "metric")

    if kind in ("example3", "example4"):
        missing = [label for label, coord in points if coord is None]
        if missing:
            raise _fail(
                "points",
                f"metric kind {kind!r} needs a 'coordinate' for every point; "
                f"missing for {missing}",
            )
        if "space" in doc:
            space = parse_space(doc["space"])
            if space.dimension != 2 or not space.cone.is_orthant():
                raise _fail(
                    "space",
                    f"metric kind {kind!r} fixes the plane with the orthant cone",
                )
        coords = [(label, coord) for label, coord in points]
        try:
            if kind == "example3":
                instance = build_example3(coords)
            else:
                alpha = _rational(_require(metric, "alpha", "metric"), "metric.alpha")
                instance = build_example4(coords, alpha)
        except ValueError as exc:
            raise _fail("metric", str(exc)) from None
    elif kind == "table":
        space = parse_space(_require(doc, "space", "top level"))
        entries_doc = _require(metric, "entries", "metric")
        if not isinstance(entries_doc, list):
            raise _fail("metric.entries", "expected an array of [from, to, vector] triples")
        table = {}
        for i, entry in enumerate(entries_doc):
            spot = f"metric.entries[{i}]"
            if not (isinstance(entry, list) and len(entry) == 3):
                raise _fail(spot, "expected [from, to, vector]")
            src, dst, value = entry
            if not (isinstance(src, str) and isinstance(dst, str)):
                raise _fail(spot, "from/to must be label strings")
            table[(src, dst)] = _vec(value, f"{spot}[2]", space.dimension)
        try:
            instance = QcmInstance(space, labels, table)
        except (ValueError, KeyError) as exc:
            raise _fail("metric.entries", str(exc)) from None
    else:
        raise _fail("metric.kind", f"unknown kind {kind!r}; expected 'table', 'example3', or 'example4'")

    queries = []
    for i, qdoc in enumerate(doc.get("queries", [])):
        spot = f"queries[{i}]"
        if not isinstance(qdoc, dict):
            raise _fail(spot, "expected an object with 'q'")
        q = _require(qdoc, "q", spot)
        candidates = qdoc.get("candidates")
        if candidates is None:
            candidates = list(instance.points)
        if not isinstance(candidates, list) or not all(isinstance(c, str) for c in candidates):
            raise _fail(f"{spot}.candidates", "expected an array of label strings")
        direction = qdoc.get("direction", FORWARD)
        try:
            queries.append(Query(q, frozenset(candidates), direction))
        except ValueError as exc:
            raise _fail(spot, str(exc)) from None

    embedding = None
    if "embedding" in doc:
        emb_doc = doc["embedding"]
        if not isinstance(emb_doc, dict):
            raise _fail("embedding", "expected an object mapping labels to vectors")
        embedding = {
            label: _vec(value, f"embedding[{label!r}]") for label, value in emb_doc.items()
        }
    return LoadedInstance(instance, queries, embedding)


def load_instance_file(path: str | Path) -> LoadedInstance:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InstanceFileError(f"{path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFileError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    try:
        return parse_instance(doc)
    except InstanceFileError as exc:
        raise InstanceFileError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# Writing instances and witnesses
# ---------------------------------------------------------------------------

def vec_json(vec: Vec) -> list[str]:
    return [format_rational(c) for c in vec]


def space_json(space: OrderedSpace) -> dict:
    doc = {
        "dimension": space.dimension,
        "rows": [vec_json(row) for row in space.cone.rows],
    }
    return doc


def instance_json(
    instance: QcmInstance, queries: list[Query] | None = None
) -> dict:
    """Instance file document. Generator-built instances serialize their
    closed form; explicit tables list every entry."""
    provenance = instance.provenance
    doc: dict = {}
    if provenance.kind == EXPLICIT_TABLE:
        doc["space"] = space_json(instance.space)
        doc["points"] = list(instance.points)
        doc["metric"] = {
            "kind": "table",
            "entries": [[r, s, vec_json(v)] for r, s, v in instance.entries()],
        }
    else:
        coords = provenance.coordinate_map()
        doc["points"] = [
            {"label": label, "coordinate": format_rational(coords[label])}
            for label in instance.points
        ]
        if provenance.kind == DIRECTION_METRIC:
            doc["metric"] = {"kind": "example3"}
        elif provenance.kind == ALPHA_METRIC:
            doc["metric"] = {"kind": "example4", "alpha": format_rational(provenance.alpha)}
        else:  # pragma: no cover - exhaustive over provenance kinds
            raise ValueError(f"unknown provenance kind {provenance.kind!r}")
    if queries:
        doc["queries"] = [
            {
                "q": query.q,
                "candidates": sorted(query.candidates),
                "direction": query.direction,
            }
            for query in queries
        ]
    return doc


def witness_json(witness: WitnessTable) -> dict:
    return {
        "q": witness.q,
        "direction": witness.direction,
        "f": [[label, vec_json(value)] for label, value in sorted(witness.f.items())],
    }


def parse_witness(doc: dict) -> WitnessTable:
    if not isinstance(doc, dict):
        raise InstanceFileError("witness: expected a JSON object")
    q = _require(doc, "q", "witness")
    direction = _require(doc, "direction", "witness")
    f_doc = _require(doc, "f", "witness")
    if not isinstance(f_doc, list):
        raise InstanceFileError("witness.f: expected an array of [label, vector] pairs")
    table = {}
    for i, entry in enumerate(f_doc):
        spot = f"witness.f[{i}]"
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], str)):
            raise _fail(spot, "expected [label, vector]")
        table[entry[0]] = _vec(entry[1], f"{spot}[1]")
    try:
        return WitnessTable(q, direction, table)
    except ValueError as exc:
        raise InstanceFileError(f"witness: {exc}") from None


def load_witness_file(path: str | Path) -> WitnessTable:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise InstanceFileError(f"{path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InstanceFileError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    try:
        return parse_witness(doc)
    except InstanceFileError as exc:
        raise InstanceFileError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# Result rendering
# ---------------------------------------------------------------------------

def _jsonify(value):
    if isinstance(value, Vec):
        return vec_json(value)
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (tuple, list)):
        return [_jsonify(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonify(v) for k, v in value.items()}
    return value


def axiom_report_json(report: AxiomReport) -> dict:
    return {
        "passed": report.passed,
        "checks": [
            {
                "axiom": c.axiom,
                "passed": c.passed,
                "checks": c.checks,
                "counterexample": _jsonify(c.counterexample),
                "note": c.note,
            }
            for c in report
        ],
    }


def approximation_json(query: Query, result: ApproximationResult) -> dict:
    return {
        "q": query.q,
        "direction": query.direction,
        "candidates": sorted(query.candidates),
        "best": sorted(result.best),
        "common_distance": vec_json(result.common_distance)
        if result.common_distance is not None
        else None,
        "minimal_front": sorted(result.minimal_front),
        "stats": {
            "pairs": result.stats.pairs,
            "comparable": result.stats.comparable,
            "incomparable": result.stats.incomparable,
        },
    }


def verdict_json(verdict: WitnessVerdict) -> dict:
    doc: dict = {"holds": verdict.holds}
    if not verdict.holds:
        doc["failed_condition"] = verdict.failed_condition
        point, value = verdict.counterexample
        doc["counterexample"] = {"point": point, "value": vec_json(value)}
    return doc


def chebyshev_report_json(report: ChebyshevReport) -> dict:
    return {
        "direction": report.family.direction,
        "candidates": sorted(report.family.candidates),
        "queries": list(report.family.queries),
        "semantics": report.semantics,
        "chebyshev": {
            "holds": report.chebyshev_holds,
            "counterexamples": [
                {"q": q, "h1": h1, "h2": h2}
                for q, h1, h2 in report.chebyshev_counterexamples
            ],
        },
        "quasi": {
            "holds": report.quasi_holds,
            "counterexamples": [
                {"q": q, "reason": reason} for q, reason in report.quasi_counterexamples
            ],
        },
        "pseudo": {
            "evaluated": report.pseudo_evaluated,
            "holds": report.pseudo_holds,
        },
        "census": [
            {"q": entry.q, "cardinality": entry.cardinality, "rank": entry.rank}
            for entry in report.census
        ],
    }
