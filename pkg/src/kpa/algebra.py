"""Exact arithmetic in the Kumjian-Pask algebra KP_R(Λ).

An element is a finite map ``(α, β) -> r`` with ``s(α) == s(β)`` standing for
``Σ r s_α s_{β*}``.  Products are expanded with minimal common extensions,
so the span form is closed under multiplication.  Span forms are not unique;
:func:`equals` compares two elements after expanding every graded component
to a common level, where the spanning monomials are linearly independent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    BoundExceeded,
    GraphMismatch,
    InternalConsistencyError,
    LevelExplosion,
    LevelTooLow,
    NotUniformLevel,
    RingMismatch,
    SourcesPresent,
    ZeroElement,
)
from .kgraph import (
    Degree,
    KGraph,
    Path,
    deg_add,
    deg_join,
    deg_le,
    deg_sub,
    degrees_between,
)
from .rings import Ring, RingSpec, get_ring

Key = tuple[Path, Path]

MAX_LEVEL_TERMS = 10**6


def mce(g: KGraph, beta: Path, gamma: Path) -> list[tuple[Path, Path]]:
    """Pairs (ε, ζ) with βε = γζ and d(βε) = d(β) ∨ d(γ)."""
    key = ("mce", beta, gamma)
    hit = g._cache.get(key)
    if hit is not None:
        return hit
    out: list[tuple[Path, Path]] = []
    if beta.rng == gamma.rng:
        q = deg_join(beta.degree, gamma.degree)
        for eps in g.paths_from(beta.src, deg_sub(q, beta.degree)):
            w = g.compose(beta, eps)
            if g.segment(w, g.zero(), gamma.degree) == gamma:
                out.append((eps, g.segment(w, gamma.degree, q)))
    g._cache[key] = out
    return out


def count_paths(g: KGraph, v: str, n: Sequence[int]) -> int:
    """|vΛ^n| by dynamic programming, without listing the paths."""
    key = ("count", v, tuple(n))
    hit = g._cache.get(key)
    if hit is not None:
        return hit
    counts = {v: 1}
    for colour, reps in enumerate(n, start=1):
        for _ in range(reps):
            nxt: dict[str, int] = {}
            for at, c in counts.items():
                for e in g.edges_into(at, colour):
                    s = g.edges[e].src
                    nxt[s] = nxt.get(s, 0) + c
            counts = nxt
    total = sum(counts.values())
    g._cache[key] = total
    return total


class KPAlgebra:
    """KP_R(Λ) for a finite k-graph without sources."""

    def __init__(self, graph: KGraph, ring: Ring | RingSpec | str = "int"):
        if not graph.no_sources:
            raise SourcesPresent(*graph.source_witness)
        self.graph = graph
        self.ring = get_ring(ring)

    def __repr__(self) -> str:
        return f"KPAlgebra({self.graph.name or 'graph'}, {self.ring.spec})"

    def coerce(self, c):
        if isinstance(c, int) and not isinstance(c, bool):
            return self.ring.from_int(c)
        return c

    def element(self, terms: Mapping[Key, object] | Iterable[tuple[Key, object]] = ()) -> AlgebraElement:
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Key, object] = {}
        R = self.ring
        for (a, b), c in items:
            if a.src != b.src:
                raise GraphMismatch(f"key ({a}, {b}) has s(α) != s(β)")
            c = self.coerce(c)
            acc[(a, b)] = R.add(acc[(a, b)], c) if (a, b) in acc else c
        return AlgebraElement(self, {k: c for k, c in acc.items() if not R.is_zero(c)})

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def one(self) -> AlgebraElement:
        return self.element({(self.graph.vertex(v), self.graph.vertex(v)): 1 for v in self.graph.vertices})

    def path(self, p: Path | str) -> Path:
        return self.graph.parse_path(p) if isinstance(p, str) else p

    def p(self, v: str) -> AlgebraElement:
        pv = self.graph.vertex(v)
        return self.element({(pv, pv): 1})

    def s(self, lam: Path | str) -> AlgebraElement:
        lam = self.path(lam)
        return self.element({(lam, self.graph.vertex(lam.src)): 1})

    def st(self, lam: Path | str) -> AlgebraElement:
        """The ghost generator s_{λ*}."""
        lam = self.path(lam)
        return self.element({(self.graph.vertex(lam.src), lam): 1})

    def term(self, alpha: Path | str, beta: Path | str, coeff=1) -> AlgebraElement:
        return self.element({(self.path(alpha), self.path(beta)): coeff})

    def scalar(self, c) -> AlgebraElement:
        return scale(self.coerce(c), self.one())


class AlgebraElement:
    """Immutable element of KP_R(Λ) in span form."""

    __slots__ = ("alg", "terms")
    __hash__ = None  # equality is semantic

    def __init__(self, alg: KPAlgebra, terms: dict[Key, object]):
        self.alg = alg
        self.terms = terms

    @property
    def graph(self) -> KGraph:
        return self.alg.graph

    @property
    def ring(self) -> Ring:
        return self.alg.ring

    def sorted_items(self) -> list[tuple[Key, object]]:
        def order(item):
            (a, b), _ = item
            comp = deg_sub(a.degree, b.degree)
            return (comp, str(a), str(b))

        return sorted(self.terms.items(), key=order)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return not is_zero(self)

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            other = self.alg.scalar(other)
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return scale(self.ring.from_int(-1), self)

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            other = self.alg.scalar(other)
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        return scale(self.alg.coerce(other), self)

    def __rmul__(self, other):
        return scale(self.alg.coerce(other), self)

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return equals(self, other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"<{format_element(self, sep=' + ')}>"


# --- elementary operations ----------------------------------------------------

def _check(x: AlgebraElement, y: AlgebraElement) -> None:
    if x.alg.graph is not y.alg.graph:
        raise GraphMismatch("elements live over different graphs")
    if x.alg.ring != y.alg.ring:
        raise RingMismatch(f"{x.alg.ring.spec} vs {y.alg.ring.spec}")


def add(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    _check(x, y)
    R = x.ring
    out = dict(x.terms)
    for key, c in y.terms.items():
        if key in out:
            s = R.add(out[key], c)
            if R.is_zero(s):
                del out[key]
            else:
                out[key] = s
        else:
            out[key] = c
    return AlgebraElement(x.alg, out)


def sub(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return add(x, scale(x.ring.from_int(-1), y))


def scale(r, x: AlgebraElement) -> AlgebraElement:
    R = x.ring
    r = x.alg.coerce(r)
    out = {}
    for key, c in x.terms.items():
        v = R.mul(r, c)
        if not R.is_zero(v):
            out[key] = v
    return AlgebraElement(x.alg, out)


def star(x: AlgebraElement) -> AlgebraElement:
    """Transpose involution: (r s_α s_{β*})* = r s_β s_{α*}."""
    return AlgebraElement(x.alg, {(b, a): c for (a, b), c in x.terms.items()})


def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    _check(x, y)
    g = x.graph
    R = x.ring
    by_gamma: dict[Path, list[tuple[Path, object]]] = {}
    for (gam, delta), c in y.terms.items():
        by_gamma.setdefault(gam, []).append((delta, c))
    out: dict[Key, object] = {}
    for (alpha, beta), c1 in x.terms.items():
        for gam, rest in by_gamma.items():
            ext = mce(g, beta, gam)
            if not ext:
                continue
            for eps, zeta in ext:
                left = g.compose(alpha, eps)
                for delta, c2 in rest:
                    key = (left, g.compose(delta, zeta))
                    v = R.mul(c1, c2)
                    out[key] = R.add(out[key], v) if key in out else v
    return AlgebraElement(x.alg, {k: c for k, c in out.items() if not R.is_zero(c)})


def component_of(key: Key) -> Degree:
    a, b = key
    return deg_sub(a.degree, b.degree)


def graded_components(x: AlgebraElement) -> dict[Degree, AlgebraElement]:
    parts: dict[Degree, dict[Key, object]] = {}
    for key, c in x.terms.items():
        parts.setdefault(component_of(key), {})[key] = c
    return {n: AlgebraElement(x.alg, t) for n, t in sorted(parts.items())}


# --- level expansion and equality -------------------------------------------

def _expand_terms(alg: KPAlgebra, terms: Mapping[Key, object], level: Degree) -> dict[Key, object]:
    g = alg.graph
    R = alg.ring
    projected = sum(count_paths(g, a.src, deg_sub(level, b.degree)) for a, b in terms)
    if projected > MAX_LEVEL_TERMS:
        raise LevelExplosion(f"expansion to level {level} would produce {projected} terms")
    out: dict[Key, object] = {}
    for (a, b), c in terms.items():
        if b.degree == level:
            key = (a, b)
            out[key] = R.add(out[key], c) if key in out else c
            continue
        for lam in g.paths_from(a.src, deg_sub(level, b.degree)):
            key = (g.compose(a, lam), g.compose(b, lam))
            out[key] = R.add(out[key], c) if key in out else c
    return {k: c for k, c in out.items() if not R.is_zero(c)}


def expand_to_level(x: AlgebraElement, component: Sequence[int], level: Sequence[int]) -> AlgebraElement:
    """Rewrite the terms of one graded component so every β has degree ``level``."""
    component, level = tuple(component), tuple(level)
    if not x.graph.no_sources:
        raise SourcesPresent(*x.graph.source_witness)
    chosen = {k: c for k, c in x.terms.items() if component_of(k) == component}
    for a, b in chosen:
        if not deg_le(b.degree, level):
            raise LevelTooLow(f"level {level} is below d({b}) = {b.degree}")
    rest = {k: c for k, c in x.terms.items() if component_of(k) != component}
    rest.update(_expand_terms(x.alg, chosen, level))
    return AlgebraElement(x.alg, rest)


def expand_uniform(x: AlgebraElement, level: Sequence[int] | None = None) -> AlgebraElement:
    """Expand all components so every β has the same degree (the join, by default)."""
    if not x.terms:
        return x
    if level is None:
        level = x.graph.zero()
        for _, b in x.terms:
            level = deg_join(level, b.degree)
    for a, b in x.terms:
        if not deg_le(b.degree, level):
            raise LevelTooLow(f"level {tuple(level)} is below d({b}) = {b.degree}")
    return AlgebraElement(x.alg, _expand_terms(x.alg, x.terms, tuple(level)))


def canonical_components(x: AlgebraElement) -> dict[Degree, dict[Key, object]]:
    """Per graded component, the terms expanded to the join of that component's β-degrees."""
    if not x.graph.no_sources:
        raise SourcesPresent(*x.graph.source_witness)
    out = {}
    for comp, part in graded_components(x).items():
        level = x.graph.zero()
        for _, b in part.terms:
            level = deg_join(level, b.degree)
        terms = _expand_terms(x.alg, part.terms, level)
        if terms:
            out[comp] = terms
    return out


def canonical_form(x: AlgebraElement) -> AlgebraElement:
    terms: dict[Key, object] = {}
    for part in canonical_components(x).values():
        terms.update(part)
    return AlgebraElement(x.alg, terms)


def is_zero(x: AlgebraElement) -> bool:
    if not x.terms:
        return True
    return not canonical_components(x)


def equals(x: AlgebraElement, y: AlgebraElement) -> bool:
    _check(x, y)
    return is_zero(sub(x, y))


# --- display --------------------------------------------------------------------

def reduce_display(x: AlgebraElement) -> AlgebraElement:
    """Collapse complete families {(αλ, βλ) : λ ∈ s(α)Λ^{e_i}} with equal coefficients.

    Cosmetic only: the result equals ``x`` but is not a canonical form.
    """
    g = x.graph
    if not g.no_sources:
        raise SourcesPresent(*g.source_witness)
    R = x.ring
    terms = dict(x.terms)
    changed = True
    while changed:
        changed = False
        for i in range(1, g.k + 1):
            ei = g.unit(i)
            for key in sorted(terms, key=lambda k: (component_of(k), k[0].sort_key(), k[1].sort_key())):
                if key not in terms:
                    continue
                a1, b1 = key
                if not (deg_le(ei, a1.degree) and deg_le(ei, b1.degree)):
                    continue
                lam = g.segment(a1, deg_sub(a1.degree, ei), a1.degree)
                if g.segment(b1, deg_sub(b1.degree, ei), b1.degree) != lam:
                    continue
                alpha = g.segment(a1, g.zero(), deg_sub(a1.degree, ei))
                beta = g.segment(b1, g.zero(), deg_sub(b1.degree, ei))
                coeff = terms[key]
                family = [(g.compose(alpha, l), g.compose(beta, l)) for l in g.paths_from(alpha.src, ei)]
                if not all(f in terms and R.eq(terms[f], coeff) for f in family):
                    continue
                for f in family:
                    del terms[f]
                parent = (alpha, beta)
                s = R.add(terms[parent], coeff) if parent in terms else coeff
                if R.is_zero(s):
                    terms.pop(parent, None)
                else:
                    terms[parent] = s
                changed = True
    return AlgebraElement(x.alg, terms)


def format_element(x: AlgebraElement, sep: str = "\n") -> str:
    """One term per line, ``<coeff> * s(<α>) st(<β>)``; ``0`` for the empty sum.

    Multi-term coefficients (Laurent rings) are parenthesised.
    """
    if not x.terms:
        return "0"
    R = x.ring
    lines = []
    for (a, b), c in x.sorted_items():
        coeff = R.fmt(c)
        if re.search(r"[+]|(?<![\^])-", coeff[1:]):
            coeff = f"({coeff})"
        lines.append(f"{coeff} * s({a}) st({b})")
    return sep.join(lines)


# --- compression ------------------------------------------------------------------

def pick_compressor(x: AlgebraElement) -> tuple[Path, list[Path]]:
    """A γ among the β's with x s_γ != 0, and G = {α : (α, γ) a key of x}."""
    if not x.terms:
        raise ZeroElement("cannot compress the zero element")
    degrees = {b.degree for _, b in x.terms}
    if len(degrees) != 1:
        raise NotUniformLevel(f"β-degrees are not uniform: {sorted(degrees)}")
    alg = x.alg
    for gamma in sorted({b for _, b in x.terms}, key=Path.sort_key):
        if not is_zero(mul(x, alg.s(gamma))):
            G = sorted((a for a, b in x.terms if b == gamma), key=Path.sort_key)
            return gamma, G
    raise ZeroElement("element is zero")


@dataclass(frozen=True)
class Compression:
    sigma: Path
    tau: Path
    coeff: object
    vertex: str


def compress_to_vertex(x: AlgebraElement, bound: Sequence[int] | None = None) -> Compression:
    """Find σ, τ with s_{σ*} x s_τ = r p_w and r != 0.

    λ is searched in order of increasing degree up to ``bound`` (default 6 in
    every colour).  On a periodic graph no separating λ may exist, and
    :class:`BoundExceeded` is raised once the bound is exhausted.
    """
    g = x.graph
    if bound is None:
        bound = (6,) * g.k
    bound = tuple(bound)
    if is_zero(x):
        raise ZeroElement("cannot compress the zero element")
    y = canonical_form(x)
    y = expand_uniform(y)
    gamma, G = pick_compressor(y)
    delta = G[0]
    r = y.terms[(delta, gamma)]
    v = delta.src
    rivals = [a for a in G if a != delta and a.src == v]
    alg = x.alg
    for n in degrees_between(g.zero(), bound):
        for lam in g.paths_from(v, n):
            head = g.segment(g.compose(delta, lam), g.zero(), n)
            if any(g.segment(g.compose(a, lam), g.zero(), n) == head for a in rivals):
                continue
            sigma = g.compose(delta, lam)
            tau = g.compose(gamma, lam)
            w = lam.src
            got = mul(mul(alg.st(sigma), x), alg.s(tau))
            if not equals(got, scale(r, alg.p(w))):
                raise InternalConsistencyError(f"compression with λ = {lam} did not collapse")
            return Compression(sigma, tau, r, w)
    raise BoundExceeded(bound)
