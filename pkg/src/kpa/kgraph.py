"""Finite k-graphs given by a coloured skeleton and a set of commuting squares.

A morphism is stored as its colour-ordered edge word: all colour-1 edges
first (at the range end), then colour 2, and so on.  Edges are composed
left to right, so ``s(word[t]) == r(word[t + 1])``.  The square bijection
lets any word with a different colour order be rewritten into that form.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import (
    AssociativityFailure,
    BadRange,
    DanglingEdge,
    FMapUndefined,
    NotComposable,
    SquareNotBijective,
    TooLarge,
    UnknownEdge,
)

Degree = tuple[int, ...]

_FORBIDDEN_ID_CHARS = set(".|() \t\n*+")


# --- degree arithmetic -------------------------------------------------------

def zero_degree(k: int) -> Degree:
    return (0,) * k


def unit_degree(k: int, i: int) -> Degree:
    """e_i for colour ``i`` in 1..k."""
    return tuple(1 if j == i - 1 else 0 for j in range(k))


def deg_add(m: Sequence[int], n: Sequence[int]) -> Degree:
    return tuple(a + b for a, b in zip(m, n))


def deg_sub(m: Sequence[int], n: Sequence[int]) -> Degree:
    return tuple(a - b for a, b in zip(m, n))


def deg_join(m: Sequence[int], n: Sequence[int]) -> Degree:
    return tuple(max(a, b) for a, b in zip(m, n))


def deg_meet(m: Sequence[int], n: Sequence[int]) -> Degree:
    return tuple(min(a, b) for a, b in zip(m, n))


def deg_le(m: Sequence[int], n: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(m, n))


def deg_scale(c: int, m: Sequence[int]) -> Degree:
    return tuple(c * a for a in m)


def colours_of(n: Sequence[int]) -> list[int]:
    """Colour sequence of a canonical word of degree ``n``."""
    return [i + 1 for i, c in enumerate(n) for _ in range(c)]


def degrees_between(lo: Sequence[int], hi: Sequence[int]) -> list[Degree]:
    """All degrees n with lo <= n <= hi, ordered by total size then lexicographically."""
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    out = [tuple(p) for p in itertools.product(*ranges)]
    out.sort(key=lambda d: (sum(d), d))
    return out


def format_degree(n: Sequence[int]) -> str:
    return ",".join(str(c) for c in n)


def parse_degree(text: str, k: int | None = None) -> Degree:
    t = text.strip().strip("()（）").replace(" ", "")
    d = tuple(int(c) for c in t.split(",")) if t else ()
    if k is not None and len(d) != k:
        raise BadRange(f"degree {text!r} does not have {k} entries")
    if any(c < 0 for c in d):
        raise BadRange(f"degree {text!r} has a negative entry")
    return d


# --- data model --------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    id: str
    color: int
    src: str
    rng: str


@dataclass(frozen=True)
class Path:
    """A morphism of a k-graph in canonical (colour-ordered) form."""

    rng: str
    word: tuple[str, ...]
    src: str
    degree: Degree

    @property
    def is_vertex(self) -> bool:
        return not self.word

    def sort_key(self) -> tuple:
        return (self.degree, str(self))

    def __str__(self) -> str:
        return ".".join(self.word) if self.word else self.rng

    def __repr__(self) -> str:
        return f"Path({self})"


@dataclass(frozen=True)
class Square:
    lhs: tuple[str, str]
    rhs: tuple[str, str]


@dataclass(eq=False)
class KGraph:
    """Validated finite k-graph.  Build it with :func:`validate`."""

    k: int
    vertices: tuple[str, ...]
    edges: dict[str, Edge]
    squares: tuple[Square, ...]
    name: str = ""
    no_sources: bool = True
    source_witness: tuple[str, int] | None = None
    _swap: dict[tuple[str, str], tuple[str, str]] = field(default_factory=dict, repr=False)
    _in: dict[tuple[str, int], tuple[str, ...]] = field(default_factory=dict, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    # --- basic queries ---

    def edge(self, eid: str) -> Edge:
        try:
            return self.edges[eid]
        except KeyError:
            raise UnknownEdge(f"unknown edge {eid!r}") from None

    def color(self, eid: str) -> int:
        return self.edges[eid].color

    def edges_into(self, v: str, color: int) -> tuple[str, ...]:
        """Edge ids of the given colour whose range is ``v`` (that is, vΛ^{e_i})."""
        return self._in.get((v, color), ())

    def edges_of_color(self, color: int) -> list[str]:
        return sorted(e.id for e in self.edges.values() if e.color == color)

    def zero(self) -> Degree:
        return zero_degree(self.k)

    def unit(self, i: int) -> Degree:
        return unit_degree(self.k, i)

    def ones(self) -> Degree:
        return (1,) * self.k

    def vertex(self, v: str) -> Path:
        if v not in self._vertex_set:
            raise UnknownEdge(f"unknown vertex {v!r}")
        return Path(v, (), v, self.zero())

    @property
    def _vertex_set(self) -> frozenset:
        vs = self._cache.get("vertex_set")
        if vs is None:
            vs = self._cache["vertex_set"] = frozenset(self.vertices)
        return vs

    def summary(self) -> dict:
        per_color = {str(i): len(self.edges_of_color(i)) for i in range(1, self.k + 1)}
        return {
            "k": self.k,
            "vertices": len(self.vertices),
            "edges_per_color": per_color,
            "no_sources": self.no_sources,
        }

    # --- word rewriting ---

    def _degree_of(self, word: Sequence[str]) -> Degree:
        d = [0] * self.k
        for e in word:
            d[self.edges[e].color - 1] += 1
        return tuple(d)

    def normalize_word(self, word: Sequence[str], strategy: str = "left") -> tuple[str, ...]:
        """Bubble a composable word into colour order using the square bijection.

        ``strategy`` picks the leftmost or rightmost out-of-order pair at each
        step; both give the same result on a valid k-graph.
        """
        w = list(word)
        color = self.color
        while True:
            bad = [t for t in range(len(w) - 1) if color(w[t]) > color(w[t + 1])]
            if not bad:
                return tuple(w)
            t = bad[0] if strategy == "left" else bad[-1]
            w[t], w[t + 1] = self._swap[(w[t], w[t + 1])]

    def _recolor(self, word: Sequence[str], target: Sequence[int]) -> list[str]:
        """Rewrite ``word`` into the factorization with colour sequence ``target``."""
        w = list(word)
        for t, c in enumerate(target):
            if self.color(w[t]) == c:
                continue
            j = next(j for j in range(t + 1, len(w)) if self.color(w[j]) == c)
            for s in range(j, t, -1):
                w[s - 1], w[s] = self._swap[(w[s - 1], w[s])]
        return w

    def _make(self, word: Sequence[str], rng: str, src: str) -> Path:
        word = tuple(word)
        if word:
            rng = self.edges[word[0]].rng
            src = self.edges[word[-1]].src
        return Path(rng, word, src, self._degree_of(word))

    def path(self, word: Sequence[str] | str) -> Path:
        """Build a canonical path from an edge word (any colour order) or a vertex id."""
        if isinstance(word, str):
            return self.parse_path(word)
        word = tuple(word)
        if not word:
            raise BadRange("empty word needs a vertex; use KGraph.vertex")
        for e in word:
            self.edge(e)
        for a, b in zip(word, word[1:]):
            if self.edges[a].src != self.edges[b].rng:
                raise NotComposable(f"s({a}) != r({b})")
        w = self.normalize_word(word)
        return self._make(w, "", "")

    def parse_path(self, literal: str) -> Path:
        t = literal.strip()
        if "." not in t and t in self._vertex_set:
            return self.vertex(t)
        if not t:
            raise UnknownEdge("empty path literal")
        return self.path(tuple(t.split(".")))

    def compose(self, lam: Path, mu: Path) -> Path:
        if lam.src != mu.rng:
            raise NotComposable(f"s({lam}) = {lam.src} but r({mu}) = {mu.rng}")
        if not mu.word:
            return lam
        if not lam.word:
            return mu
        return self._make(self.normalize_word(lam.word + mu.word), "", "")

    def compose_all(self, *paths: Path) -> Path:
        out = paths[0]
        for p in paths[1:]:
            out = self.compose(out, p)
        return out

    def segment(self, lam: Path, p: Sequence[int], q: Sequence[int]) -> Path:
        """λ(p, q): the middle factor of λ = λ'λ''λ''' with d(λ') = p, d(λ'') = q - p."""
        p, q = tuple(p), tuple(q)
        d = lam.degree
        if not (deg_le(self.zero(), p) and deg_le(p, q) and deg_le(q, d)):
            raise BadRange(f"need 0 <= {p} <= {q} <= {d}")
        if p == q:
            return self.vertex(self.vertex_at(lam, p))
        if p == self.zero() and q == d:
            return lam
        key = ("seg", lam, p, q)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        target = colours_of(p) + colours_of(deg_sub(q, p)) + colours_of(deg_sub(d, q))
        w = self._recolor(lam.word, target)
        a = sum(p)
        b = sum(q)
        out = self._make(w[a:b], "", "")
        self._cache[key] = out
        return out

    def vertex_at(self, lam: Path, p: Sequence[int]) -> str:
        """λ(p): the vertex reached after the initial factor of degree ``p``."""
        p = tuple(p)
        if not (deg_le(self.zero(), p) and deg_le(p, lam.degree)):
            raise BadRange(f"need 0 <= {p} <= {lam.degree}")
        if p == self.zero():
            return lam.rng
        if p == lam.degree:
            return lam.src
        w = self._recolor(lam.word, colours_of(p) + colours_of(deg_sub(lam.degree, p)))
        return self.edges[w[sum(p) - 1]].src

    # --- enumeration ---

    def paths_from(self, v: str, n: Sequence[int]) -> list[Path]:
        """vΛ^n in a deterministic order."""
        n = tuple(n)
        key = ("from", v, n)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        colours = colours_of(n)
        out: list[Path] = []

        def walk(at: str, t: int, acc: list[str]) -> None:
            if t == len(colours):
                out.append(self._make(acc, v, at))
                return
            for e in self.edges_into(at, colours[t]):
                acc.append(e)
                walk(self.edges[e].src, t + 1, acc)
                acc.pop()

        if v not in self._vertex_set:
            raise UnknownEdge(f"unknown vertex {v!r}")
        walk(v, 0, [])
        out.sort(key=Path.sort_key)
        self._cache[key] = out
        return out

    def paths_of_degree(self, n: Sequence[int]) -> list[Path]:
        return [p for v in self.vertices for p in self.paths_from(v, n)]

    def iter_paths_upto(self, v: str, bound: Sequence[int]) -> Iterator[Path]:
        for n in degrees_between(self.zero(), bound):
            yield from self.paths_from(v, n)

    # --- restriction ---

    def restrict(self, keep_vertices: Iterable[str], name: str = "") -> KGraph:
        """Subgraph on ``keep_vertices`` keeping the edges and squares whose source is kept."""
        keep = set(keep_vertices)
        edges = [e for e in self.edges.values() if e.src in keep]
        kept = {e.id for e in edges}
        squares = [
            sq for sq in self.squares if all(x in kept for x in sq.lhs + sq.rhs)
        ]
        return validate(
            self.k,
            [v for v in self.vertices if v in keep],
            edges,
            squares,
            name=name,
        )


# --- validation --------------------------------------------------------------

def _as_edge(e) -> Edge:
    if isinstance(e, Edge):
        return e
    return Edge(str(e["id"]), int(e["color"]), str(e["src"]), str(e["rng"]))


def _as_square(s) -> Square:
    if isinstance(s, Square):
        return s
    lhs = tuple(str(x) for x in s["lhs"])
    rhs = tuple(str(x) for x in s["rhs"])
    if len(lhs) != 2 or len(rhs) != 2:
        raise SquareNotBijective((lhs, rhs), "square sides must have two edges")
    return Square(lhs, rhs)


def validate(k: int, vertices, edges, squares, name: str = "") -> KGraph:
    """Check a skeleton plus squares and return the k-graph they define."""
    if k < 1:
        raise DanglingEdge("-", f"k must be positive, got {k}")
    vertices = tuple(str(v) for v in vertices)
    if len(set(vertices)) != len(vertices):
        dup = next(v for v in vertices if vertices.count(v) > 1)
        raise DanglingEdge(dup, "duplicate vertex id")
    vset = set(vertices)
    edge_map: dict[str, Edge] = {}
    for raw in edges:
        e = _as_edge(raw)
        if e.id in edge_map:
            raise DanglingEdge(e.id, "duplicate edge id")
        if set(e.id) & _FORBIDDEN_ID_CHARS or not e.id:
            raise DanglingEdge(e.id, "edge id contains a reserved character")
        if not 1 <= e.color <= k:
            raise DanglingEdge(e.id, f"color {e.color} outside 1..{k}")
        if e.src not in vset or e.rng not in vset:
            raise DanglingEdge(e.id, "endpoint is not a vertex")
        edge_map[e.id] = e
    for v in vertices:
        if set(v) & _FORBIDDEN_ID_CHARS or not v:
            raise DanglingEdge(v, "vertex id contains a reserved character")

    incoming: dict[tuple[str, int], list[str]] = {}
    for e in edge_map.values():
        incoming.setdefault((e.rng, e.color), []).append(e.id)
    in_map = {key: tuple(sorted(ids)) for key, ids in incoming.items()}

    swap: dict[tuple[str, str], tuple[str, str]] = {}
    sq_list = tuple(_as_square(s) for s in squares)
    for sq in sq_list:
        for x in sq.lhs + sq.rhs:
            if x not in edge_map:
                raise DanglingEdge(x, "square refers to an unknown edge")
        a, b = (edge_map[x] for x in sq.lhs)
        c, d = (edge_map[x] for x in sq.rhs)
        if not (a.color < b.color and c.color == b.color and d.color == a.color):
            raise SquareNotBijective(sq.lhs, "colours must be lhs (i, j), rhs (j, i) with i < j")
        if not (a.src == b.rng and c.src == d.rng and c.rng == a.rng and d.src == b.src):
            raise SquareNotBijective(sq.lhs, "square does not commute on endpoints")
        if sq.lhs in swap:
            raise SquareNotBijective(sq.lhs, "increasing 2-path appears twice")
        if sq.rhs in swap:
            raise SquareNotBijective(sq.rhs, "decreasing 2-path appears twice")
        swap[sq.lhs] = sq.rhs
        swap[sq.rhs] = sq.lhs

    for a in sorted(edge_map):
        ea = edge_map[a]
        for c2 in range(1, k + 1):
            if c2 == ea.color:
                continue
            for b in in_map.get((ea.src, c2), ()):
                if (a, b) not in swap:
                    raise SquareNotBijective((a, b), "composable 2-path missing from squares")

    g = KGraph(k, vertices, edge_map, sq_list, name=name, _swap=swap, _in=in_map)

    if k >= 3:
        _check_hexagons(g)

    # Report the vertex missing the most colours (a corner of a grid), first in file order.
    best = None
    for v in vertices:
        missing = [i for i in range(1, k + 1) if not in_map.get((v, i))]
        if missing and (best is None or len(missing) > best[0]):
            best = (len(missing), v, missing[0])
    if best is not None:
        g.no_sources = False
        g.source_witness = (best[1], best[2])
    return g


def _all_normal_forms(g: KGraph, word: tuple[str, ...]) -> set[tuple[str, ...]]:
    seen = {word}
    todo = deque([word])
    finals = set()
    while todo:
        w = todo.popleft()
        moved = False
        for t in range(len(w) - 1):
            if g.color(w[t]) > g.color(w[t + 1]):
                moved = True
                x, y = g._swap[(w[t], w[t + 1])]
                nw = w[:t] + (x, y) + w[t + 2:]
                if nw not in seen:
                    seen.add(nw)
                    todo.append(nw)
        if not moved:
            finals.add(w)
    return finals


def _check_hexagons(g: KGraph) -> None:
    by_rng: dict[str, list[str]] = {}
    for e in g.edges.values():
        by_rng.setdefault(e.rng, []).append(e.id)
    for a in sorted(g.edges):
        for b in sorted(by_rng.get(g.edges[a].src, ())):
            for c in sorted(by_rng.get(g.edges[b].src, ())):
                if len({g.color(a), g.color(b), g.color(c)}) < 3:
                    continue
                if len(_all_normal_forms(g, (a, b, c))) != 1:
                    raise AssociativityFailure((a, b, c))


# --- constructions -----------------------------------------------------------

def build_omega(k: int, m: Sequence[int]) -> KGraph:
    """Ω_{k,m}: vertices p <= m, one colour-i edge from p + e_i to p."""
    m = tuple(m)
    if k not in (1, 2, 3) or len(m) != k:
        raise BadRange(f"build_omega needs k in 1..3 and a degree with k entries, got k={k}, m={m}")
    count = 1
    for c in m:
        count *= c + 1
    if count > 10_000:
        raise TooLarge(f"Ω_{{{k},{m}}} would have {count} vertices")
    pts = [tuple(p) for p in itertools.product(*[range(c + 1) for c in m])]
    name = format_degree
    edges = []
    for p in pts:
        for i in range(1, k + 1):
            q = deg_add(p, unit_degree(k, i))
            if deg_le(q, m):
                edges.append(Edge(f"e{i}:{name(p)}", i, name(q), name(p)))
    squares = []
    for p in pts:
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                pi = deg_add(p, unit_degree(k, i))
                pj = deg_add(p, unit_degree(k, j))
                if deg_le(deg_add(pi, unit_degree(k, j)), m):
                    squares.append(
                        Square(
                            (f"e{i}:{name(p)}", f"e{j}:{name(pi)}"),
                            (f"e{j}:{name(p)}", f"e{i}:{name(pj)}"),
                        )
                    )
    return validate(k, [name(p) for p in pts], edges, squares, name=f"omega-{k}-{'-'.join(map(str, m))}")


@dataclass(frozen=True)
class SkewEntry:
    image: str
    order: int | None


def skew_order(g: KGraph, strict: bool = True) -> dict[str, SkewEntry]:
    """The map F on colour-1 edges (fe = F(e)h) and the orbit length o(e).

    With ``strict`` an edge without a unique colour-2 edge f, s(f) = r(e),
    raises :class:`FMapUndefined`; otherwise such edges are left out and an
    orbit that leaves the domain gets order ``None``.
    """
    if g.k != 2:
        raise BadRange("skew_order needs a 2-graph")
    red_by_src: dict[str, list[str]] = {}
    for e in g.edges.values():
        if e.color == 2:
            red_by_src.setdefault(e.src, []).append(e.id)
    fmap: dict[str, str] = {}
    for e in g.edges_of_color(1):
        fs = red_by_src.get(g.edges[e].rng, [])
        if len(fs) != 1:
            if strict:
                raise FMapUndefined(e)
            continue
        fmap[e] = g._swap[(fs[0], e)][0]
    out = {}
    for e in sorted(fmap):
        cur, steps, order = fmap[e], 1, None
        while steps <= len(fmap):
            if cur == e:
                order = steps
                break
            if cur not in fmap:
                break
            cur, steps = fmap[cur], steps + 1
        out[e] = SkewEntry(fmap[e], order)
    return out
