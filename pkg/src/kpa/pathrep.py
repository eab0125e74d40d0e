"""The infinite-path representation on eventually periodic paths.

An :class:`EPPath` ``(prefix, cycle)`` stands for the infinite path
``prefix · cycle · cycle · ...``; the cycle must have positive degree in
every colour so its powers eventually exceed any degree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import AlgebraElement, KPAlgebra, is_zero, sub
from .errors import (
    BadRange,
    GraphMismatch,
    InternalConsistencyError,
    NotComposable,
    NotVerifiedWitness,
    RingMismatch,
)
from .kgraph import KGraph, Path, deg_add, deg_join, deg_le, deg_scale, deg_sub, degrees_between
from .rings import Ring
from .structure import Periodic, PeriodicityWitness, check_periodicity_pair


@dataclass(frozen=True)
class EPPath:
    prefix: Path
    cycle: Path

    @property
    def rng(self) -> str:
        return self.prefix.rng

    def __str__(self) -> str:
        return f"{self.prefix}|{self.cycle}"


def _power(g: KGraph, c: Path, i: int) -> Path:
    out = g.vertex(c.rng)
    for _ in range(i):
        out = g.compose(out, c)
    return out


def _absorb(g: KGraph, prefix: Path, cycle: Path) -> Path:
    while deg_le(cycle.degree, prefix.degree):
        cut = deg_sub(prefix.degree, cycle.degree)
        if g.segment(prefix, cut, prefix.degree) != cycle:
            break
        prefix = g.segment(prefix, g.zero(), cut)
    return prefix


def make_ep(g: KGraph, prefix: Path | str, cycle: Path | str) -> EPPath:
    """Validated, canonicalised eventually periodic path."""
    prefix = g.parse_path(prefix) if isinstance(prefix, str) else prefix
    cycle = g.parse_path(cycle) if isinstance(cycle, str) else cycle
    if cycle.rng != cycle.src or cycle.rng != prefix.src:
        raise NotComposable(f"cycle {cycle} must start and end at s({prefix}) = {prefix.src}")
    if min(cycle.degree) < 1:
        raise BadRange(f"cycle degree {cycle.degree} must be positive in every colour")
    best = None
    for a in degrees_between(g.zero(), cycle.degree):
        if a == cycle.degree:
            continue
        head = g.segment(cycle, g.zero(), a)
        tail = g.segment(cycle, a, cycle.degree)
        c2 = g.compose(tail, head)
        p2 = _absorb(g, g.compose(prefix, head), c2)
        cand = EPPath(p2, c2)
        key = (p2.degree, str(p2), str(c2))
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


def parse_ep(g: KGraph, literal: str) -> EPPath:
    """``"prefix|cycle"`` with path literals, e.g. ``"b|a"`` or ``"v|b.f"``."""
    if "|" not in literal:
        raise BadRange(f"EPPath literal needs 'prefix|cycle': {literal!r}")
    p, c = literal.split("|", 1)
    return make_ep(g, p, c)


def _unroll(g: KGraph, x: EPPath, n: Sequence[int]) -> Path:
    i = 0
    d = x.prefix.degree
    while not deg_le(n, d):
        i += 1
        d = deg_add(d, x.cycle.degree)
    return g.compose(x.prefix, _power(g, x.cycle, i))


def ep_truncate(g: KGraph, x: EPPath, n: Sequence[int]) -> Path:
    """x(0, n)."""
    return g.segment(_unroll(g, x, n), g.zero(), tuple(n))


def ep_shift(g: KGraph, x: EPPath, n: Sequence[int]) -> EPPath:
    """x(n, ∞)."""
    w = _unroll(g, x, n)
    return make_ep(g, g.segment(w, tuple(n), w.degree), x.cycle)


def ep_equals(g: KGraph, x: EPPath, y: EPPath) -> bool:
    if x.rng != y.rng:
        return False
    if x == y:
        return True
    bound = deg_add(deg_join(x.prefix.degree, y.prefix.degree), deg_add(x.cycle.degree, y.cycle.degree))
    verdict = ep_truncate(g, x, bound) == ep_truncate(g, y, bound)
    if verdict:
        deep = deg_add(bound, deg_scale(3, deg_join(x.cycle.degree, y.cycle.degree)))
        if ep_truncate(g, x, deep) != ep_truncate(g, y, deep):
            raise InternalConsistencyError(f"{x} and {y} agree to {bound} but differ by {deep}")
    return verdict


def ep_from_vertex(g: KGraph, v: str, rng: random.Random | None = None, prefix: Path | None = None) -> EPPath:
    """An eventually periodic path with range ``v``.

    Walks in steps of degree (1, ..., 1) until a vertex repeats.  Choices are
    lexicographically least unless ``rng`` is given.  An optional ``prefix``
    (with range ``v``) is placed in front.
    """
    start = prefix if prefix is not None else g.vertex(v)
    ones = g.ones()
    steps: list[Path] = []
    seen = {start.src: 0}
    at = start.src
    while True:
        options = g.paths_from(at, ones)
        step = rng.choice(options) if rng else options[0]
        steps.append(step)
        at = step.src
        if at in seen:
            i = seen[at]
            break
        seen[at] = len(steps)
    head = start
    for s in steps[:i]:
        head = g.compose(head, s)
    cycle = steps[i]
    for s in steps[i + 1:]:
        cycle = g.compose(cycle, s)
    return make_ep(g, head, cycle)


def random_ep(g: KGraph, rng: random.Random, v: str | None = None, max_prefix: int = 2) -> EPPath:
    v = v if v is not None else rng.choice(g.vertices)
    n = tuple(rng.randint(0, max_prefix) for _ in range(g.k))
    options = g.paths_from(v, n)
    return ep_from_vertex(g, v, rng, prefix=rng.choice(options))


# --- operators ----------------------------------------------------------------------

def apply_q(g: KGraph, v: str, x: EPPath) -> EPPath | None:
    return x if x.rng == v else None


def apply_t(g: KGraph, lam: Path, x: EPPath) -> EPPath | None:
    if lam.src != x.rng:
        return None
    return make_ep(g, g.compose(lam, x.prefix), x.cycle)


def apply_tstar(g: KGraph, mu: Path, x: EPPath) -> EPPath | None:
    if ep_truncate(g, x, mu.degree) != mu:
        return None
    return ep_shift(g, x, mu.degree)


class PathVector:
    """Finite R-linear combination of eventually periodic paths."""

    def __init__(self, g: KGraph, ring: Ring, pairs: Iterable[tuple[EPPath, object]] = ()):
        self.graph = g
        self.ring = ring
        self._buckets: dict[tuple, list[list]] = {}
        for x, c in pairs:
            self._add(x, c)

    def _bucket_key(self, x: EPPath) -> tuple:
        return (x.rng, ep_truncate(self.graph, x, deg_scale(2, self.graph.ones())))

    def _add(self, x: EPPath, c) -> None:
        R = self.ring
        bucket = self._buckets.setdefault(self._bucket_key(x), [])
        for entry in bucket:
            if ep_equals(self.graph, entry[0], x):
                entry[1] = R.add(entry[1], c)
                return
        bucket.append([x, c])

    def items(self) -> list[tuple[EPPath, object]]:
        R = self.ring
        out = [(x, c) for b in self._buckets.values() for x, c in b if not R.is_zero(c)]
        out.sort(key=lambda xc: (xc[0].rng, str(xc[0])))
        return out

    def is_zero(self) -> bool:
        return not self.items()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PathVector):
            return NotImplemented
        R = self.ring
        diff = PathVector(self.graph, R, self.items())
        for x, c in other.items():
            diff._add(x, R.neg(c))
        return diff.is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        return "PathVector(" + ", ".join(f"{self.ring.fmt(c)}*[{x}]" for x, c in self.items()) + ")"


def vector(g: KGraph, ring: Ring, x: EPPath, coeff=None) -> PathVector:
    return PathVector(g, ring, [(x, ring.one() if coeff is None else coeff)])


def apply_generator(g: KGraph, ring: Ring, kind: str, arg, x: EPPath) -> PathVector:
    """Q_v, T_λ or T_{μ*} applied to a basis path; ``kind`` is ``"Q"``, ``"T"`` or ``"T*"``."""
    if kind == "Q":
        y = apply_q(g, arg, x)
    elif kind == "T":
        y = apply_t(g, arg, x)
    elif kind == "T*":
        y = apply_tstar(g, arg, x)
    else:
        raise ValueError(f"unknown generator kind {kind!r}")
    return PathVector(g, ring, [] if y is None else [(y, ring.one())])


def apply_element(a: AlgebraElement, v: PathVector | EPPath) -> PathVector:
    """π(a) v, with each term r s_α s_{β*} acting as r T_α T_{β*}."""
    g = a.graph
    R = a.ring
    if isinstance(v, EPPath):
        v = vector(g, R, v)
    if v.graph is not g:
        raise GraphMismatch("path vector lives over a different graph")
    if v.ring != R:
        raise RingMismatch(f"{v.ring.spec} vs {R.spec}")
    out = PathVector(g, R)
    for x, c in v.items():
        for (alpha, beta), r in a.terms.items():
            y = apply_tstar(g, beta, x)
            if y is None:
                continue
            z = apply_t(g, alpha, y)
            if z is not None:
                out._add(z, R.mul(r, c))
    return out


# --- kernel witnesses -------------------------------------------------------------------

def kernel_witness(
    alg: KPAlgebra,
    w: PeriodicityWitness,
    samples: int = 20,
    seed: int = 0,
) -> AlgebraElement:
    """Nonzero a = s_{μα} s_{(μα)*} - s_{να} s_{(μα)*} annihilating every infinite path.

    μ ∈ vΛ^m and α ∈ s(μ)Λ^{(m∨n)-m} are lexicographically least and
    ν = (μα)(0, n).
    """
    g = alg.graph
    if not isinstance(check_periodicity_pair(g, w.v, w.m, w.n), Periodic):
        raise NotVerifiedWitness(f"{w} is not a periodicity witness")
    p = deg_join(w.m, w.n)
    mu = g.paths_from(w.v, w.m)[0]
    alpha = g.paths_from(mu.src, deg_sub(p, w.m))[0]
    mualpha = g.compose(mu, alpha)
    nu = g.segment(mualpha, g.zero(), w.n)
    if nu.src != alpha.rng:
        raise NotVerifiedWitness(f"s({nu}) != r({alpha}); witness is inconsistent")
    nualpha = g.compose(nu, alpha)
    a = sub(alg.term(mualpha, mualpha), alg.term(nualpha, mualpha))
    if is_zero(a):
        raise InternalConsistencyError("kernel witness vanished in the algebra")
    rng = random.Random(seed)
    for _ in range(samples):
        x = random_ep(g, rng, w.v)
        if not apply_element(a, x).is_zero():
            raise InternalConsistencyError(f"kernel witness does not annihilate {x}")
    return a
