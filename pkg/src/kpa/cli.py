"""Command-line front end: ``kpa validate|analyze|eval|lattice|laurent-check|fixtures``.

Graph arguments are file paths, or ``fixture:<name>`` for a built-in graph.
Exit codes: 0 success, 1 invalid input, 2 sources present, 3 internal
consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path as FilePath

from .algebra import KPAlgebra, canonical_form, equals, format_element, reduce_display
from .errors import InternalConsistencyError, KPAError, SourcesPresent
from .expr import evaluate
from .fixtures import FIXTURE_NAMES, fixture
from .graphio import load_graph, serialize_graph
from .kgraph import KGraph, parse_degree
from .laurent_check import laurent_check
from .pathrep import kernel_witness
from .rings import RingSpec
from .structure import sat_her_lattice, verdicts

SCHEMA_VERSION = 1

EXIT_OK, EXIT_INVALID, EXIT_SOURCES, EXIT_INTERNAL = 0, 1, 2, 3


def _load(spec: str) -> KGraph:
    if spec.startswith("fixture:"):
        return fixture(spec.split(":", 1)[1])
    return load_graph(spec)


def build_report(g: KGraph, ring: str = "int", pair_bound: int = 3, depth_bound=None) -> dict:
    """Analysis report as a JSON-ready dict with a fixed key order."""
    if not g.no_sources:
        raise SourcesPresent(*g.source_witness)
    depth_bound = tuple(depth_bound) if depth_bound else (6,) * g.k
    v = verdicts(g, ring, pair_bound)
    lat = sat_her_lattice(g)
    witness_elem = None
    if v.aperiodicity.periodic:
        alg = KPAlgebra(g, ring)
        witness_elem = format_element(kernel_witness(alg, v.aperiodicity.witness), sep=" + ")
    return {
        "schema_version": SCHEMA_VERSION,
        "graph": {"name": g.name, **g.summary()},
        "validation": {"valid": True, "no_sources": g.no_sources},
        "ring": str(RingSpec.parse(ring)),
        "bounds": {"pair_bound": pair_bound, "depth_bound": list(depth_bound)},
        "aperiodicity": v.aperiodicity.as_json(),
        "kernel_witness": witness_elem,
        "cofinal": v.cofinal,
        "lattice": lat.as_json(),
        "condition_k": v.condition_k.as_json(),
        "verdicts": v.as_json(),
    }


def cmd_validate(args) -> int:
    g = _load(args.file)
    if not g.no_sources:
        v, colour = g.source_witness
        print(f"valid {g.k}-graph with sources: vertex {v} receives no edge of color {colour}")
        return EXIT_SOURCES
    s = g.summary()
    print(f"valid {g.k}-graph, {s['vertices']} vertices, edges per color {s['edges_per_color']}, no sources")
    return EXIT_OK


def cmd_analyze(args) -> int:
    g = _load(args.file)
    depth = parse_degree(args.depth_bound, g.k) if args.depth_bound else None
    start = time.perf_counter()
    report = build_report(g, args.ring, args.pair_bound, depth)
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    text = json.dumps(report, indent=2) + "\n"
    if args.json and args.json != "-":
        FilePath(args.json).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_eval(args) -> int:
    g = _load(args.file)
    alg = KPAlgebra(g, args.ring)
    values = [evaluate(alg, e) for e in args.expr]
    if args.check_equal:
        if len(values) != 2:
            print("--check-equal needs exactly two -e expressions", file=sys.stderr)
            return EXIT_INVALID
        print("EQUAL" if equals(values[0], values[1]) else "NOT-EQUAL")
        return EXIT_OK
    for i, val in enumerate(values):
        if i:
            print("---")
        shown = reduce_display(canonical_form(val)) if args.reduce else canonical_form(val)
        print(format_element(shown))
    return EXIT_OK


def cmd_lattice(args) -> int:
    g = _load(args.file)
    lat = sat_her_lattice(g)
    if args.format == "dot":
        sys.stdout.write(lat.to_dot())
    else:
        sys.stdout.write(json.dumps(lat.as_json(), indent=2) + "\n")
    return EXIT_OK


def cmd_laurent_check(args) -> int:
    res = laurent_check(args.ring, args.trials, args.seed)
    if res.passed:
        print(f"PASS: {res.trials} trials, {res.checks} checks")
        return EXIT_OK
    print(f"FAIL: {json.dumps(res.counterexample)}")
    return EXIT_INTERNAL


def cmd_fixtures(args) -> int:
    if args.action == "list":
        for name in FIXTURE_NAMES:
            print(name)
        return EXIT_OK
    if not args.name:
        print("fixtures emit needs a name", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(serialize_graph(fixture(args.name)))
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kpa", description="Kumjian-Pask algebras of finite k-graphs")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="check a graph file")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("analyze", help="structural report as JSON")
    sp.add_argument("file")
    sp.add_argument("--ring", default="int")
    sp.add_argument("--pair-bound", type=int, default=3)
    sp.add_argument("--depth-bound", default=None, help="degree such as 6,6")
    sp.add_argument("--json", default=None, help="output file (default stdout)")
    sp.add_argument("--timing", action="store_true", help="add wall-clock timing (breaks byte-identity)")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("eval", help="evaluate algebra expressions")
    sp.add_argument("file")
    sp.add_argument("--ring", default="int")
    sp.add_argument("-e", dest="expr", action="append", required=True)
    sp.add_argument("--check-equal", action="store_true")
    sp.add_argument("--reduce", action="store_true", help="collapse complete families for display")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("lattice", help="saturated hereditary lattice")
    sp.add_argument("file")
    sp.add_argument("--format", choices=("dot", "json"), default="dot")
    sp.set_defaults(func=cmd_lattice)

    sp = sub.add_parser("laurent-check", help="randomised Laurent isomorphism check")
    sp.add_argument("--ring", choices=("int", "rat"), default="int")
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_laurent_check)

    sp = sub.add_parser("fixtures", help="list or emit built-in graphs")
    sp.add_argument("action", choices=("list", "emit"))
    sp.add_argument("name", nargs="?")
    sp.set_defaults(func=cmd_fixtures)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except SourcesPresent as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOURCES
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (KPAError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
