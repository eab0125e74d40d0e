"""Kumjian-Pask algebras of finite higher-rank graphs."""

from .algebra import (
    AlgebraElement,
    KPAlgebra,
    add,
    compress_to_vertex,
    equals,
    expand_to_level,
    graded_components,
    is_zero,
    mce,
    mul,
    pick_compressor,
    reduce_display,
    scale,
    star,
)
from .fixtures import fixture
from .graphio import load_graph, parse_graph_text, serialize_graph
from .kgraph import KGraph, Path, build_omega, skew_order, validate
from .rings import RingSpec, get_ring, ring_ops

__all__ = [
    "AlgebraElement",
    "KGraph",
    "KPAlgebra",
    "Path",
    "RingSpec",
    "add",
    "build_omega",
    "compress_to_vertex",
    "equals",
    "expand_to_level",
    "fixture",
    "get_ring",
    "graded_components",
    "is_zero",
    "load_graph",
    "mce",
    "mul",
    "parse_graph_text",
    "pick_compressor",
    "reduce_display",
    "ring_ops",
    "scale",
    "serialize_graph",
    "skew_order",
    "star",
    "validate",
]
