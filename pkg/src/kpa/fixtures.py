"""Built-in example graphs shared by the tests and the CLI."""

from __future__ import annotations

from .errors import KPAError
from .kgraph import KGraph, build_omega, validate


def _e(eid, color, src, rng):
    return {"id": eid, "color": color, "src": src, "rng": rng}


def _sq(lhs, rhs):
    return {"lhs": list(lhs), "rhs": list(rhs)}


FIXTURE_DATA: dict[str, dict] = {
    "laurent2": {
        "k": 2,
        "vertices": ["v"],
        "edges": [_e("b", 1, "v", "v"), _e("f", 2, "v", "v")],
        "squares": [_sq(["b", "f"], ["f", "b"])],
    },
    "loop1": {
        "k": 1,
        "vertices": ["v"],
        "edges": [_e("a", 1, "v", "v")],
        "squares": [],
    },
    "leavitt2": {
        "k": 1,
        "vertices": ["v"],
        "edges": [_e("a", 1, "v", "v"), _e("b", 1, "v", "v")],
        "squares": [],
    },
    "vwcofinal": {
        "k": 1,
        "vertices": ["v", "w"],
        "edges": [_e("a", 1, "v", "v"), _e("e", 1, "v", "w")],
        "squares": [],
    },
    "twoblock": {
        "k": 1,
        "vertices": ["u", "v"],
        "edges": [
            _e("a", 1, "u", "u"),
            _e("b", 1, "v", "v"),
            _e("c", 1, "v", "v"),
            _e("e", 1, "v", "u"),
        ],
        "squares": [],
    },
    "redcycle2": {
        "k": 2,
        "vertices": ["v1", "v2"],
        "edges": [
            _e("b1", 1, "v1", "v1"),
            _e("b2", 1, "v2", "v2"),
            _e("r12", 2, "v1", "v2"),
            _e("r21", 2, "v2", "v1"),
        ],
        "squares": [
            _sq(["b1", "r21"], ["r21", "b2"]),
            _sq(["b2", "r12"], ["r12", "b1"]),
        ],
    },
}

FIXTURE_NAMES = ("laurent2", "omega-2-3-2", "loop1", "leavitt2", "vwcofinal", "twoblock", "redcycle2")

_built: dict[str, KGraph] = {}


def fixture(name: str) -> KGraph:
    """Return the named built-in graph (validated once, then shared)."""
    g = _built.get(name)
    if g is not None:
        return g
    if name == "omega-2-3-2":
        g = build_omega(2, (3, 2))
        g.name = name
    elif name in FIXTURE_DATA:
        d = FIXTURE_DATA[name]
        g = validate(d["k"], d["vertices"], d["edges"], d["squares"], name=name)
    else:
        raise KPAError(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}")
    _built[name] = g
    return g
