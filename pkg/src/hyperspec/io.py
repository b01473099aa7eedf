"""Hypergraph files, weight files and deterministic JSON emission.

A hypergraph file is a JSON object::

    {"vertices": [...], "edges": [[...], ...], "edge_weights": [...], "annotations": {...}}

``edge_weights`` and ``annotations`` are optional. Canonical form keeps the
vertex order, lists each edge's members in vertex order, and omits
``edge_weights`` when every weight is 1.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError
from .hypergraph import Hypergraph

SCHEMA_VERSION = "1"


# -- deterministic JSON ----------------------------------------------------------------


def _scalar(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return '"nan"'
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        text = "%.17g" % x
        if x == 0.0:
            text = "0.0" if math.copysign(1.0, x) > 0 else "-0.0"
        elif not any(ch in text for ch in ".en"):
            text += ".0"
        return text
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _is_flat(items) -> bool:
    return all(not isinstance(x, (dict, list, tuple, np.ndarray)) for x in items)


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Serialize to JSON with every float written to 17 significant digits.

    Dict key order is preserved; lists of scalars and small flat objects stay on one line. Non-finite
    floats become the strings ``"inf"``, ``"-inf"`` and ``"nan"``.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (set, frozenset)):
        obj = sorted(obj, key=str)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        if len(obj) <= 3 and _is_flat(obj.values()):
            return "{" + ", ".join(f"{json.dumps(str(k), ensure_ascii=False)}: {_scalar(v)}" for k, v in obj.items()) + "}"
        parts = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(parts) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if _is_flat(obj):
            return "[" + ", ".join(_scalar(x) for x in obj) + "]"
        parts = [pad + dumps(x, indent, _level + 1) for x in obj]
        return "[\n" + ",\n".join(parts) + "\n" + end + "]"
    return _scalar(obj)


# -- hypergraph files ----------------------------------------------------------------------


def parse_json(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: {exc.msg} at line {exc.lineno} column {exc.colno}", exc.lineno, exc.colno) from None


def _vertex_id(v, where):
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise ParseError(f"{where}: vertex ids must be strings or integers, got {v!r}")
    return v


def parse_hypergraph(text: str, source: str = "<input>") -> tuple[Hypergraph, dict]:
    """Parse a hypergraph document; returns the hypergraph and its annotations (possibly empty)."""
    doc = parse_json(text, source)
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    unknown = set(doc) - {"vertices", "edges", "edge_weights", "annotations", "schema_version"}
    if unknown:
        raise ParseError(f"{source}: unknown keys {sorted(unknown)}")
    if "vertices" not in doc or "edges" not in doc:
        raise ParseError(f"{source}: 'vertices' and 'edges' are required")
    if not isinstance(doc["vertices"], list) or not isinstance(doc["edges"], list):
        raise ParseError(f"{source}: 'vertices' and 'edges' must be lists")
    vertices = [_vertex_id(v, source) for v in doc["vertices"]]
    edges = []
    for k, e in enumerate(doc["edges"]):
        if not isinstance(e, list):
            raise ParseError(f"{source}: edge {k} must be a list")
        edges.append([_vertex_id(v, source) for v in e])
    weights = doc.get("edge_weights")
    if weights is not None:
        if not isinstance(weights, list) or any(isinstance(w, bool) or not isinstance(w, (int, float)) for w in weights):
            raise ParseError(f"{source}: 'edge_weights' must be a list of numbers")
    annotations = doc.get("annotations") or {}
    if not isinstance(annotations, dict):
        raise ParseError(f"{source}: 'annotations' must be an object")
    return Hypergraph(vertices, edges, weights), annotations


def hypergraph_document(h: Hypergraph, annotations: dict | None = None) -> dict:
    doc = {
        "vertices": list(h.vertices),
        "edges": [h.sorted_edge(k) for k in range(h.n_edges)],
    }
    if h.is_weighted:
        doc["edge_weights"] = list(h.edge_weights)
    if annotations:
        doc["annotations"] = annotations
    return doc


def emit_hypergraph(h: Hypergraph, annotations: dict | None = None) -> str:
    """Canonical text of a hypergraph file (ends with a newline)."""
    return dumps(hypergraph_document(h, annotations)) + "\n"


def read_text(path: str | None) -> tuple[str, str]:
    if path is None or path == "-":
        return sys.stdin.read(), "<stdin>"
    try:
        return Path(path).read_text(encoding="utf-8"), str(path)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def load_hypergraph(path: str | None) -> tuple[Hypergraph, dict]:
    text, source = read_text(path)
    return parse_hypergraph(text, source)


def save_hypergraph(path, h: Hypergraph, annotations: dict | None = None) -> None:
    Path(path).write_text(emit_hypergraph(h, annotations), encoding="utf-8")


def parse_weights(text: str, h: Hypergraph, source: str = "<weights>") -> tuple[dict, dict]:
    """Custom weights: ``{"delta_v": {...} or [...], "delta_e": {...} or [...]}``.

    Lists are read in canonical vertex / edge order; objects are keyed by
    vertex id (as a string) and edge index.
    """
    doc = parse_json(text, source)
    if not isinstance(doc, dict) or "delta_v" not in doc or "delta_e" not in doc:
        raise ParseError(f"{source}: weights need 'delta_v' and 'delta_e'")
    dv, de = doc["delta_v"], doc["delta_e"]
    if isinstance(dv, list):
        if len(dv) != h.n_vertices:
            raise ValidationError(f"{source}: {len(dv)} vertex weights for {h.n_vertices} vertices")
        dv = dict(zip(h.vertices, dv))
    if isinstance(de, list):
        if len(de) != h.n_edges:
            raise ValidationError(f"{source}: {len(de)} edge weights for {h.n_edges} edges")
        de = dict(enumerate(de))
    else:
        de = {int(k): v for k, v in de.items()}
    return dv, de
