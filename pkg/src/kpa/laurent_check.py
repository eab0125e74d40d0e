"""Randomised check that KP_R(laurent2) is the Laurent polynomial ring R[x^±1, y^±1].

The map φ sends s_{(i,j)} to x^i y^j, s_{(i,j)*} to x^-i y^-j and p_v to 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import AlgebraElement, KPAlgebra, add, equals, expand_uniform, mul
from .fixtures import fixture
from .kgraph import deg_sub
from .rings import Laurent, RingSpec, get_ring


def phi(x: AlgebraElement, target=None) -> Laurent:
    """Image of an element of KP_R(laurent2) in R[x^±1, y^±1]."""
    base = x.ring.spec
    target = target or get_ring(RingSpec.laurent(base, 2))
    out: dict[tuple[int, int], object] = {}
    for (a, b), c in x.terms.items():
        e = deg_sub(a.degree, b.degree)
        out[e] = out.get(e, 0) + c
    return Laurent(out)


def random_element(alg: KPAlgebra, rng: random.Random, max_terms: int = 4) -> AlgebraElement:
    """Random sum of terms r s_α s_{β*} with d(α), d(β) <= (3,3) and |r| <= 9."""
    g = alg.graph
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        da = (rng.randint(0, 3), rng.randint(0, 3))
        db = (rng.randint(0, 3), rng.randint(0, 3))
        a = g.paths_from("v", da)[0]
        b = g.paths_from("v", db)[0]
        terms.append(((a, b), alg.ring.from_int(rng.randint(-9, 9))))
    return alg.element(terms)


@dataclass
class LaurentCheckResult:
    passed: bool
    trials: int
    checks: int = 0
    counterexample: dict | None = field(default=None)


def laurent_check(ring: str = "int", trials: int = 200, seed: int = 0) -> LaurentCheckResult:
    spec = RingSpec.parse(ring)
    if spec.kind not in ("int", "rat"):
        raise ValueError("laurent-check supports --ring int or rat")
    alg = KPAlgebra(fixture("laurent2"), spec)
    L = get_ring(RingSpec.laurent(spec, 2))
    rng = random.Random(seed)
    checks = 0

    def fail(kind, x, y):
        return LaurentCheckResult(
            False, trials, checks, {"check": kind, "x": repr(x), "y": repr(y)}
        )

    for t in range(trials):
        x = random_element(alg, rng)
        if t % 2:
            # same element written at a deeper level, so the equality branch is exercised
            level = (rng.randint(3, 4), rng.randint(3, 4))
            y = expand_uniform(x, level)
        else:
            y = random_element(alg, rng)
        fx, fy = phi(x, L), phi(y, L)
        checks += 1
        if phi(mul(x, y), L) != L.mul(fx, fy):
            return fail("multiplicative", x, y)
        checks += 1
        if phi(add(x, y), L) != L.add(fx, fy):
            return fail("additive", x, y)
        checks += 1
        if equals(x, y) != (fx == fy):
            return fail("injective", x, y)
        checks += 1
        if not equals(mul(x, y), mul(y, x)):
            return fail("commutative", x, y)
    return LaurentCheckResult(True, trials, checks)
