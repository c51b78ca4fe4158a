"""JSON documents for systems, inverse systems, star families and graphs.

A system document has the keys ``elements``, ``inverse`` and ``leq``; only
order generators (cover pairs) are written, the closure is recomputed on
load. An inverse-system document has ``poset``, ``levels`` and ``bonds``.
Output is deterministic: keys are sorted and lists follow table order.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable

from .core import SepSysError, SeparationSystem, validate_system
from .graphsep import Graph, make_graph, parse_graph
from .inverse import InverseSystem, make_inverse_system, make_poset


class FormatError(SepSysError):
    pass


def system_to_doc(S: SeparationSystem) -> dict:
    inverse = [[S.labels[x], S.labels[S.inv[x]]] for x in S.separations]
    leq = [[S.labels[x], S.labels[y]] for x, y in S.cover_pairs()]
    return {"elements": list(S.labels), "inverse": inverse, "leq": leq}


def _pairs(doc: dict, key: str) -> list[tuple[str, str]]:
    raw = doc.get(key, [])
    if not isinstance(raw, list) or any(not isinstance(p, (list, tuple)) or len(p) != 2 for p in raw):
        raise FormatError(f"'{key}' must be a list of pairs")
    return [(str(a), str(b)) for a, b in raw]


def system_from_doc(doc: Any) -> SeparationSystem:
    if not isinstance(doc, dict) or "elements" not in doc or "inverse" not in doc:
        raise FormatError("a system document needs 'elements' and 'inverse'")
    unknown = set(doc) - {"elements", "inverse", "leq"}
    if unknown:
        raise FormatError(f"unknown keys {sorted(unknown)}")
    if not isinstance(doc["elements"], list):
        raise FormatError("'elements' must be a list of labels")
    return validate_system([str(e) for e in doc["elements"]], _pairs(doc, "inverse"), _pairs(doc, "leq"))


def inverse_system_to_doc(IS: InverseSystem) -> dict:
    P = IS.poset
    leq = [[P.points[p], P.points[q]] for q, p in P.covers]
    bonds = []
    for (q, p), m in sorted(IS.bonds.items()):
        Sq, Sp = IS.levels[q], IS.levels[p]
        bonds.append({"from": P.points[q], "to": P.points[p],
                      "map": {Sq.labels[x]: Sp.labels[m[x]] for x in range(len(Sq))}})
    return {"poset": {"points": list(P.points), "leq": leq},
            "levels": [system_to_doc(S) for S in IS.levels],
            "bonds": bonds}


def inverse_system_from_doc(doc: Any) -> InverseSystem:
    if not isinstance(doc, dict) or not {"poset", "levels", "bonds"} <= set(doc):
        raise FormatError("an inverse-system document needs 'poset', 'levels' and 'bonds'")
    pdoc = doc["poset"]
    if not isinstance(pdoc, dict) or "points" not in pdoc:
        raise FormatError("'poset' needs 'points'")
    points = list(pdoc["points"])
    P = make_poset(points, [tuple(pair) for pair in pdoc.get("leq", [])])
    if len(doc["levels"]) != len(points):
        raise FormatError("one level document per point required")
    levels = [system_from_doc(d) for d in doc["levels"]]
    bonds = {}
    for b in doc["bonds"]:
        if not isinstance(b, dict) or not {"from", "to", "map"} <= set(b):
            raise FormatError("each bond needs 'from', 'to' and 'map'")
        bonds[(b["from"], b["to"])] = {str(k): str(v) for k, v in b["map"].items()}
    for (q, p), m in bonds.items():
        missing = set(levels[P.idx(q)].labels) - set(m)
        if missing:
            raise FormatError(f"bond {q!r} -> {p!r} misses {sorted(missing)}")
    return make_inverse_system(P, levels, bonds)


def star_family_to_doc(IS: InverseSystem, stars: Iterable[Iterable[int]]) -> dict:
    top = IS.levels[IS.top]
    return {"system": inverse_system_to_doc(IS),
            "stars": [top.names(s) for s in stars]}


def star_family_from_doc(doc: Any) -> tuple[InverseSystem, list[frozenset[int]]]:
    """Stars are written with limit labels, which are the labels of the top level."""
    if not isinstance(doc, dict) or not {"system", "stars"} <= set(doc):
        raise FormatError("a star-family document needs 'system' and 'stars'")
    IS = inverse_system_from_doc(doc["system"])
    top = IS.levels[IS.top]
    return IS, [frozenset(top.element(str(x)) for x in star) for star in doc["stars"]]


def graph_to_doc(G: Graph) -> dict:
    edges = sorted(sorted(e, key=G.vertices.index) for e in G.edges)
    return {"vertices": list(G.vertices), "edges": edges}


def graph_from_text(text: str) -> Graph:
    """Either a JSON ``{"vertices", "edges"}`` document or an adjacency list."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(text)
        if "vertices" not in doc:
            raise FormatError("a graph document needs 'vertices'")
        return make_graph([str(v) for v in doc["vertices"]], [tuple(map(str, e)) for e in doc.get("edges", [])])
    return parse_graph(text)


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)


def load_document(path: str | Path) -> Any:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from None


def load_any(path: str | Path) -> SeparationSystem | InverseSystem:
    doc = load_document(path)
    if isinstance(doc, dict) and "poset" in doc:
        return inverse_system_from_doc(doc)
    if isinstance(doc, dict) and "system" in doc and "stars" in doc:
        return star_family_from_doc(doc)[0]
    return system_from_doc(doc)
