"""Saturated hereditary sets, cofinality, periodicity and the simplicity verdicts."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import AlgebraElement, KPAlgebra, canonical_components, canonical_form, scale
from .errors import (
    EqualDegrees,
    InternalConsistencyError,
    NonPrincipalUnsupported,
    NotSatHer,
    SourcesPresent,
)
from .kgraph import Degree, KGraph, Path, deg_join, deg_meet, deg_sub, format_degree
from .rings import RingSpec, get_ring


def _require_no_sources(g: KGraph) -> None:
    if not g.no_sources:
        raise SourcesPresent(*g.source_witness)


# --- saturated hereditary sets ----------------------------------------------

@dataclass(frozen=True)
class SatHerSet:
    vertices: frozenset[str]

    def __iter__(self):
        return iter(sorted(self.vertices))

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v) -> bool:
        return v in self.vertices

    def label(self) -> str:
        return "{" + ",".join(sorted(self.vertices)) + "}"

    def sort_key(self):
        return (len(self.vertices), sorted(self.vertices))


def is_hereditary(g: KGraph, H: Iterable[str]) -> bool:
    H = set(H)
    return all(e.src in H for e in g.edges.values() if e.rng in H)


def is_saturated(g: KGraph, H: Iterable[str]) -> bool:
    H = set(H)
    for v in g.vertices:
        if v in H:
            continue
        for i in range(1, g.k + 1):
            if all(g.edges[e].src in H for e in g.edges_into(v, i)):
                return False
    return True


def is_sat_her(g: KGraph, H: Iterable[str]) -> bool:
    H = set(H)
    return H <= set(g.vertices) and is_hereditary(g, H) and is_saturated(g, H)


def her_sat_closure(g: KGraph, S: Iterable[str]) -> SatHerSet:
    """Least saturated hereditary set containing ``S``."""
    _require_no_sources(g)
    H = set(S)
    todo = deque(sorted(H))
    while True:
        while todo:
            v = todo.popleft()
            for i in range(1, g.k + 1):
                for e in g.edges_into(v, i):
                    w = g.edges[e].src
                    if w not in H:
                        H.add(w)
                        todo.append(w)
        for v in g.vertices:
            if v in H:
                continue
            if any(
                all(g.edges[e].src in H for e in g.edges_into(v, i)) for i in range(1, g.k + 1)
            ):
                H.add(v)
                todo.append(v)
        if not todo:
            return SatHerSet(frozenset(H))


@dataclass
class SatHerLattice:
    members: list[SatHerSet]
    hasse: list[tuple[int, int]]

    def join(self, g: KGraph, a: SatHerSet, b: SatHerSet) -> SatHerSet:
        return her_sat_closure(g, a.vertices | b.vertices)

    @staticmethod
    def meet(a: SatHerSet, b: SatHerSet) -> SatHerSet:
        return SatHerSet(a.vertices & b.vertices)

    def as_json(self) -> dict:
        return {
            "members": [sorted(m.vertices) for m in self.members],
            "hasse": [list(e) for e in self.hasse],
        }

    def to_dot(self) -> str:
        lines = ["digraph sat_her_lattice {", "  rankdir=BT;"]
        for i, m in enumerate(self.members):
            lines.append(f'  n{i} [label="{m.label()}"];')
        for a, b in self.hasse:
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def sat_her_lattice(g: KGraph) -> SatHerLattice:
    """All saturated hereditary subsets, as joins of singleton closures."""
    _require_no_sources(g)
    members = {SatHerSet(frozenset())}
    members.update(her_sat_closure(g, [v]) for v in g.vertices)
    frontier = list(members)
    while frontier:
        fresh = []
        current = list(members)
        for a in frontier:
            for b in current:
                j = her_sat_closure(g, a.vertices | b.vertices)
                if j not in members:
                    members.add(j)
                    fresh.append(j)
        frontier = fresh
    ordered = sorted(members, key=SatHerSet.sort_key)
    hasse = []
    for i, a in enumerate(ordered):
        for j, b in enumerate(ordered):
            if a.vertices < b.vertices and not any(
                a.vertices < c.vertices < b.vertices for c in ordered
            ):
                hasse.append((i, j))
    return SatHerLattice(ordered, hasse)


def is_cofinal(g: KGraph) -> bool:
    _require_no_sources(g)
    everything = frozenset(g.vertices)
    return all(her_sat_closure(g, [v]).vertices == everything for v in g.vertices)


# --- periodicity ----------------------------------------------------------------

@dataclass(frozen=True)
class PeriodicityWitness:
    v: str
    m: Degree
    n: Degree
    states: frozenset = field(default=frozenset(), compare=False, repr=False)

    def as_json(self) -> dict:
        return {"v": self.v, "m": list(self.m), "n": list(self.n)}

    def __str__(self) -> str:
        return f"({self.v}, ({format_degree(self.m)}), ({format_degree(self.n)}))"


@dataclass(frozen=True)
class Periodic:
    witness: PeriodicityWitness


@dataclass(frozen=True)
class NotPeriodicAt:
    path: Path


def check_periodicity_pair(g: KGraph, v: str, m: Sequence[int], n: Sequence[int]):
    """Decide whether σ^m x = σ^n x for every infinite path x with range v.

    Runs the automaton whose states are the windows (x(m+t, p+t), x(n+t, p+t)),
    p = m ∨ n.  Returns :class:`Periodic` with the reachable states, or
    :class:`NotPeriodicAt` with a finite path whose two windows differ.
    """
    _require_no_sources(g)
    m, n = tuple(m), tuple(n)
    if m == n:
        raise EqualDegrees(f"m = n = {m}")
    p = deg_join(m, n)
    seen: dict[tuple[Path, Path], Path] = {}
    todo: deque = deque()
    for lam in g.paths_from(v, p):
        st = (g.segment(lam, m, p), g.segment(lam, n, p))
        if st not in seen:
            seen[st] = lam
            todo.append(st)
    edge_paths = {e: g.path((e,)) for e in g.edges}
    while todo:
        st = todo.popleft()
        a, b = st
        prefix = seen[st]
        for i in range(1, g.k + 1):
            ei = g.unit(i)
            for e in g.edges_into(a.src, i):
                ep = edge_paths[e]
                ae, be = g.compose(a, ep), g.compose(b, ep)
                if g.segment(ae, g.zero(), ei) != g.segment(be, g.zero(), ei):
                    return NotPeriodicAt(g.compose(prefix, ep))
                nxt = (g.segment(ae, ei, ae.degree), g.segment(be, ei, be.degree))
                if nxt not in seen:
                    seen[nxt] = g.compose(prefix, ep)
                    todo.append(nxt)
    return Periodic(PeriodicityWitness(v, m, n, frozenset(seen)))


def separates(g: KGraph, lam: Path, m: Sequence[int], n: Sequence[int]) -> bool:
    """λ(m, m + d(λ) - (m∨n)) != λ(n, n + d(λ) - (m∨n))."""
    p = deg_join(m, n)
    rest = deg_sub(lam.degree, p)
    return g.segment(lam, m, tuple(a + b for a, b in zip(m, rest))) != g.segment(
        lam, n, tuple(a + b for a, b in zip(n, rest))
    )


@dataclass(frozen=True)
class AperiodicityVerdict:
    status: str  # "periodic" | "aperiodic_certified" | "aperiodic_up_to_bounds"
    witness: PeriodicityWitness | None = None
    pair_bound: int | None = None

    @property
    def periodic(self) -> bool:
        return self.status == "periodic"

    @property
    def certified(self) -> bool:
        return self.status != "aperiodic_up_to_bounds"

    def as_json(self) -> dict:
        return {
            "status": self.status,
            "witness": self.witness.as_json() if self.witness else None,
            "pair_bound": self.pair_bound,
        }


def entryless_cycle(g: KGraph) -> tuple[str, int] | None:
    """For a 1-graph: a vertex on a cycle without an entry, and the cycle length."""
    incoming = {v: g.edges_into(v, 1) for v in g.vertices}
    for v in g.vertices:
        cur, steps = v, 0
        while len(incoming[cur]) == 1 and steps <= len(g.vertices):
            cur = g.edges[incoming[cur][0]].src
            steps += 1
            if cur == v:
                return v, steps
    return None


def candidate_pairs(k: int, bound: int) -> list[tuple[Degree, Degree]]:
    """Pairs m != n with m ∧ n = 0 and m, n <= bound·1, one orientation each."""
    degs = list(itertools.product(range(bound + 1), repeat=k))
    pairs = []
    for m in degs:
        for n in degs:
            if m < n and not any(deg_meet(m, n)):
                pairs.append((m, n))
    pairs.sort(key=lambda mn: (sum(mn[0]) + sum(mn[1]), [-c for c in mn[1]], [-c for c in mn[0]]))
    return pairs


def aperiodicity(g: KGraph, pair_bound: int = 3) -> AperiodicityVerdict:
    _require_no_sources(g)
    if not g.vertices:
        return AperiodicityVerdict("aperiodic_certified")
    if g.k == 1:
        hit = entryless_cycle(g)
        if hit is None:
            return AperiodicityVerdict("aperiodic_certified")
        v, length = hit
        res = check_periodicity_pair(g, v, (0,), (length,))
        if not isinstance(res, Periodic):
            raise InternalConsistencyError(f"entryless cycle at {v} but automaton separates")
        return AperiodicityVerdict("periodic", res.witness)
    for m, n in candidate_pairs(g.k, pair_bound):
        for v in g.vertices:
            res = check_periodicity_pair(g, v, m, n)
            if isinstance(res, Periodic):
                return AperiodicityVerdict("periodic", res.witness, pair_bound)
    return AperiodicityVerdict("aperiodic_up_to_bounds", None, pair_bound)


# --- quotients and ideals -------------------------------------------------------

def _as_set(H) -> frozenset[str]:
    return H.vertices if isinstance(H, SatHerSet) else frozenset(H)


def quotient_graph(g: KGraph, H) -> KGraph:
    """Λ∖H: vertices outside H, edges (and squares) with source outside H."""
    Hs = _as_set(H)
    if not is_sat_her(g, Hs):
        raise NotSatHer(f"{sorted(Hs)} is not saturated hereditary")
    key = ("quotient", Hs)
    hit = g._cache.get(key)
    if hit is None:
        name = f"{g.name}\\{{{','.join(sorted(Hs))}}}" if Hs else g.name
        hit = g._cache[key] = g if not Hs else g.restrict(set(g.vertices) - Hs, name=name)
    return hit


def quotient_algebra(alg: KPAlgebra, H) -> KPAlgebra:
    return KPAlgebra(quotient_graph(alg.graph, H), alg.ring)


def quotient_hom(x: AlgebraElement, H, target: KPAlgebra | None = None) -> AlgebraElement:
    """Image of ``x`` in KP_R(Λ∖H): terms with source in H are dropped."""
    Hs = _as_set(H)
    target = target or quotient_algebra(x.alg, Hs)
    if target.graph is not quotient_graph(x.graph, Hs):
        raise NotSatHer("target algebra does not match the quotient graph")
    return AlgebraElement(target, {(a, b): c for (a, b), c in x.terms.items() if a.src not in Hs})


def ideal_membership(x: AlgebraElement, H) -> bool:
    """Decide x ∈ I_H: after level expansion every surviving term has source in H."""
    Hs = _as_set(H)
    if not is_sat_her(x.graph, Hs):
        raise NotSatHer(f"{sorted(Hs)} is not saturated hereditary")
    for part in canonical_components(x).values():
        if any(a.src not in Hs for a, _ in part):
            return False
    return True


def vertices_in_ideal(alg: KPAlgebra, H) -> SatHerSet:
    """H_{I_H} = {v : p_v ∈ I_H}."""
    return SatHerSet(frozenset(v for v in alg.graph.vertices if ideal_membership(alg.p(v), H)))


@dataclass
class ConditionK:
    holds: bool
    per_set: list[tuple[SatHerSet, AperiodicityVerdict]]
    failing: SatHerSet | None = None
    witness: PeriodicityWitness | None = None

    @property
    def certified(self) -> bool:
        if not self.holds:
            return True
        return all(v.certified for _, v in self.per_set)

    def as_json(self) -> dict:
        return {
            "holds": self.holds,
            "failing_set": sorted(self.failing.vertices) if self.failing is not None else None,
            "witness": self.witness.as_json() if self.witness else None,
            "per_set": [
                {"set": sorted(h.vertices), "aperiodicity": v.status} for h, v in self.per_set
            ],
        }


def condition_k(g: KGraph, pair_bound: int = 3) -> ConditionK:
    """Check that Λ∖H is aperiodic for every proper saturated hereditary H."""
    lat = sat_her_lattice(g)
    everything = frozenset(g.vertices)
    per = []
    failing = None
    for H in lat.members:
        if H.vertices == everything:
            continue
        verdict = aperiodicity(quotient_graph(g, H), pair_bound)
        per.append((H, verdict))
        if verdict.periodic and failing is None:
            failing = (H, verdict.witness)
    if failing:
        return ConditionK(False, per, failing[0], failing[1])
    return ConditionK(True, per)


@dataclass
class Verdicts:
    cofinal: bool
    aperiodicity: AperiodicityVerdict
    condition_k: ConditionK
    basically_simple: bool
    simple: bool
    all_basic_ideals_graded: bool
    certainty: str

    def as_json(self) -> dict:
        return {
            "basically_simple": self.basically_simple,
            "simple": self.simple,
            "all_basic_ideals_graded": self.all_basic_ideals_graded,
            "certainty": self.certainty,
        }


def verdicts(g: KGraph, ring: RingSpec | str = "int", pair_bound: int = 3) -> Verdicts:
    _require_no_sources(g)
    R = get_ring(ring)
    cof = is_cofinal(g)
    ap = aperiodicity(g, pair_bound)
    ck = condition_k(g, pair_bound)
    basic = cof and not ap.periodic
    # a negative answer from cofinality or a periodic witness is exact
    certain = g.k == 1 or ((not cof or ap.periodic) and ck.certified)
    return Verdicts(
        cofinal=cof,
        aperiodicity=ap,
        condition_k=ck,
        basically_simple=basic,
        simple=basic and R.is_field,
        all_basic_ideals_graded=ck.holds,
        certainty="certified" if certain else "up_to_bounds",
    )


# --- induced ideals -----------------------------------------------------------------

def _principal_ring(alg: KPAlgebra):
    R = alg.ring
    if R.spec.kind == "laurent":
        raise NonPrincipalUnsupported("Ind/Res is supported for Z, Z/n and fields only")
    return R


def ind_membership(x: AlgebraElement, r0) -> bool:
    """x ∈ Ind (r0): every coefficient at the canonical level is a multiple of r0."""
    R = _principal_ring(x.alg)
    r0 = x.alg.coerce(r0)
    return all(R.divides(r0, c) for c in canonical_form(x).terms.values())


def res_generator(alg: KPAlgebra, r0):
    """Generator of Res(Ind (r0)) = {r : r p_v ∈ Ind (r0) for all v}, found by probing."""
    R = _principal_ring(alg)
    r0 = alg.coerce(r0)
    if R.is_zero(r0):
        return R.zero()
    kind = R.spec.kind
    if kind == "rat":
        candidates = [1]
    elif kind == "int":
        candidates = range(1, abs(r0) + 1)
    else:
        candidates = range(1, R.spec.modulus)
    for r in candidates:
        rr = R.from_int(r)
        if all(ind_membership(scale(rr, alg.p(v)), r0) for v in alg.graph.vertices):
            return rr
    raise InternalConsistencyError(f"no generator found for Res(Ind({r0}))")
