"""Reading and writing the TOML graph file format.

    k = 2
    vertices = ["v"]
    edges = [ { id = "b", color = 1, src = "v", rng = "v" }, ... ]
    squares = [ { lhs = ["b", "f"], rhs = ["f", "b"] }, ... ]
"""

from __future__ import annotations

import json
from pathlib import Path as FilePath

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ParseError
from .kgraph import KGraph, validate


def parse_graph_text(text: str, name: str = "") -> KGraph:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(
            f"graph file is not valid TOML: {exc.msg if hasattr(exc, 'msg') else exc}",
            getattr(exc, "lineno", None),
            getattr(exc, "colno", None),
        ) from exc
    for key in ("k", "vertices", "edges"):
        if key not in doc:
            raise ParseError(f"graph file missing key {key!r}")
    try:
        edges = [dict(e) for e in doc["edges"]]
        for e in edges:
            missing = {"id", "color", "src", "rng"} - set(e)
            if missing:
                raise ParseError(f"edge {e.get('id', '?')!r} missing fields {sorted(missing)}")
        return validate(int(doc["k"]), doc["vertices"], edges, doc.get("squares", []), name=name)
    except (TypeError, ValueError, KeyError) as exc:
        raise ParseError(f"malformed graph document: {exc}") from exc


def load_graph(path: str | FilePath) -> KGraph:
    p = FilePath(path)
    return parse_graph_text(p.read_text(encoding="utf-8"), name=p.stem)


def _q(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def serialize_graph(g: KGraph) -> str:
    lines = [f"k = {g.k}", "vertices = [" + ", ".join(_q(v) for v in g.vertices) + "]", "edges = ["]
    for eid in sorted(g.edges):
        e = g.edges[eid]
        lines.append(f"  {{ id = {_q(e.id)}, color = {e.color}, src = {_q(e.src)}, rng = {_q(e.rng)} }},")
    lines.append("]")
    lines.append("squares = [")
    for sq in sorted(g.squares, key=lambda s: s.lhs):
        lhs = ", ".join(_q(x) for x in sq.lhs)
        rhs = ", ".join(_q(x) for x in sq.rhs)
        lines.append(f"  {{ lhs = [{lhs}], rhs = [{rhs}] }},")
    lines.append("]")
    return "\n".join(lines) + "\n"


def graphs_equal(g: KGraph, h: KGraph) -> bool:
    return (
        g.k == h.k
        and g.vertices == h.vertices
        and g.edges == h.edges
        and set(g.squares) == set(h.squares)
    )
