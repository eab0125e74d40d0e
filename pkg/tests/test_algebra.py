from __future__ import annotations

import random

import pytest

from kpa import KPAlgebra, build_omega, fixture
from kpa.algebra import (
    LevelExplosion,
    add,
    canonical_form,
    component_of,
    compress_to_vertex,
    equals,
    expand_to_level,
    expand_uniform,
    format_element,
    graded_components,
    is_zero,
    mce,
    mul,
    pick_compressor,
    reduce_display,
    scale,
    star,
)
from kpa.errors import (
    BoundExceeded,
    GraphMismatch,
    LevelTooLow,
    NotUniformLevel,
    RingMismatch,
    SourcesPresent,
    ZeroElement,
)
from kpa.kgraph import deg_add, deg_join, deg_sub, degrees_between


def random_element(alg, rng, top=(2, 2), terms=3, coeff=5):
    """Random span-form element with term degrees <= top."""
    g = alg.graph
    top = top[: g.k]
    degs = degrees_between(g.zero(), top)
    out = []
    for _ in range(rng.randint(1, terms)):
        v = rng.choice(g.vertices)
        a = rng.choice(g.paths_from(v, rng.choice(degs)))
        b_opts = [b for d in degs for w in g.vertices for b in g.paths_from(w, d) if b.src == a.src]
        b = rng.choice(b_opts)
        out.append(((a, b), rng.choice([c for c in range(-coeff, coeff + 1) if c])))
    return alg.element(out)


# --- an independent normal form for leavitt2 --------------------------------------
#
# Over one vertex with loops a, b the monomials a_α a_β* with (α, β) not both
# ending in b form a basis.  Rewriting s_{αb} s_{(βb)*} -> s_α s_{β*} - s_{αa} s_{(βa)*}
# reaches it; products of monomials follow from prefix comparison.

def _leavitt_nf(terms: dict) -> dict:
    todo = dict(terms)
    out: dict = {}
    while todo:
        (al, be), c = todo.popitem()
        if al.endswith("b") and be.endswith("b"):
            for key, sign in (((al[:-1], be[:-1]), 1), ((al[:-1] + "a", be[:-1] + "a"), -1)):
                todo[key] = todo.get(key, 0) + sign * c
                if todo[key] == 0:
                    del todo[key]
        else:
            out[(al, be)] = out.get((al, be), 0) + c
            if out[(al, be)] == 0:
                del out[(al, be)]
    return out


def _words(x) -> dict:
    return {("".join(a.word), "".join(b.word)): c for (a, b), c in x.terms.items()}


def _leavitt_mul(x: dict, y: dict) -> dict:
    out: dict = {}
    for (a, b), c1 in x.items():
        for (g, d), c2 in y.items():
            if g.startswith(b):
                key = (a + g[len(b):], d)
            elif b.startswith(g):
                key = (a, d + b[len(g):])
            else:
                continue
            out[key] = out.get(key, 0) + c1 * c2
    return {k: c for k, c in out.items() if c}


# --- examples -------------------------------------------------------------------

def test_mce_examples():
    L = fixture("leavitt2")
    assert mce(L, L.path("a"), L.path("b")) == []
    assert mce(L, L.path("a"), L.path("a")) == [(L.vertex("v"), L.vertex("v"))]
    G = fixture("laurent2")
    assert mce(G, G.path("b"), G.path("f")) == [(G.path("f"), G.path("b"))]


def test_mul_examples(leavitt):
    A = leavitt
    assert equals(A.term("a", "b") * A.term("b", "a"), A.term("a", "a"))
    assert is_zero(A.term("a", "a") * A.term("b", "b"))
    assert (A.st("a") * A.s("a.b")).terms == A.s("b").terms


def test_star_examples(leavitt):
    A = leavitt
    assert star(A.p("v")).terms == A.p("v").terms
    assert star(A.s("a")).terms == A.st("a").terms


def test_expand_examples(leavitt, laurent):
    A = leavitt
    assert expand_to_level(A.p("v"), (0,), (1,)).terms == (A.term("a", "a") + A.term("b", "b")).terms
    x = A.term("a", "b") + A.term("b", "a")
    assert expand_to_level(x, (0,), (1,)).terms == x.terms
    B = laurent
    assert expand_to_level(B.p("v"), (0, 0), (1, 1)).terms == B.term("b.f", "b.f").terms
    with pytest.raises(LevelTooLow):
        expand_to_level(A.term("a.a", "a.a"), (0,), (1,))


def test_equality_examples(leavitt, laurent):
    A = leavitt
    assert is_zero(A.p("v") - A.term("a", "a") - A.term("b", "b"))
    assert not is_zero(A.term("a", "a") - A.term("b", "b"))
    assert equals(laurent.p("v"), laurent.term("b.f", "b.f"))


def test_graded_components_examples(laurent):
    B = laurent
    parts = graded_components(B.p("v") + 2 * B.s("b"))
    assert set(parts) == {(0, 0), (1, 0)}
    assert parts[(0, 0)].terms == B.p("v").terms
    assert parts[(1, 0)].terms == (2 * B.s("b")).terms
    assert graded_components(B.zero()) == {}


def test_reduce_display_examples(leavitt, laurent):
    A = leavitt
    assert reduce_display(A.term("a", "a") + A.term("b", "b")).terms == A.p("v").terms
    assert reduce_display(A.term("a", "a")).terms == A.term("a", "a").terms
    assert reduce_display(laurent.term("b.f", "b.f")).terms == laurent.p("v").terms


def test_reduce_display_preserves_value(leavitt, rng):
    for _ in range(50):
        x = expand_uniform(random_element(leavitt, rng))
        assert equals(reduce_display(x), x)


def test_pick_compressor_examples(leavitt):
    A = leavitt
    g = A.graph
    assert pick_compressor(2 * A.term("a", "b")) == (g.path("b"), [g.path("a")])
    assert pick_compressor(A.term("a", "a") + A.term("b", "b")) == (g.path("a"), [g.path("a")])
    assert pick_compressor(A.p("v")) == (g.vertex("v"), [g.vertex("v")])
    with pytest.raises(NotUniformLevel):
        pick_compressor(A.p("v") + A.term("a", "a"))
    with pytest.raises(ZeroElement):
        pick_compressor(A.zero())


def test_compress_examples(leavitt):
    A = leavitt
    g = A.graph
    c = compress_to_vertex(3 * A.term("a", "b"))
    assert (c.sigma, c.tau, c.coeff, c.vertex) == (g.path("a"), g.path("b"), 3, "v")
    c = compress_to_vertex(A.p("v"))
    assert (c.sigma, c.tau, c.coeff) == (g.vertex("v"), g.vertex("v"), 1)


def test_compress_bound_exceeded_on_periodic_graph():
    A = KPAlgebra(fixture("loop1"), "int")
    with pytest.raises(BoundExceeded):
        compress_to_vertex(A.term("a", "a") - A.term("a.a", "a"), bound=(4,))


def test_format_element(leavitt):
    A = leavitt
    assert format_element(A.zero()) == "0"
    assert format_element(3 * A.term("a.b", "a") - A.p("v")) == "-1 * s(v) st(v)\n3 * s(a.b) st(a)"


def test_errors():
    with pytest.raises(SourcesPresent):
        KPAlgebra(build_omega(2, (1, 1)), "int")
    A = KPAlgebra(fixture("leavitt2"), "int")
    B = KPAlgebra(fixture("loop1"), "int")
    C = KPAlgebra(fixture("leavitt2"), "rat")
    with pytest.raises(GraphMismatch):
        add(A.p("v"), B.p("v"))
    with pytest.raises(RingMismatch):
        mul(A.p("v"), C.p("v"))


def test_level_explosion_guard(leavitt):
    with pytest.raises(LevelExplosion):
        expand_to_level(leavitt.p("v"), (0,), (21,))


# --- (KP1)-(KP4) -------------------------------------------------------------------

AXIOM_FIXTURES = ("laurent2", "leavitt2", "vwcofinal", "twoblock", "redcycle2")


def _paths_upto(g, top):
    top = top[: g.k]
    return [lam for v in g.vertices for lam in g.iter_paths_upto(v, top)]


@pytest.mark.parametrize("name", AXIOM_FIXTURES)
def test_kp_relations(name):
    g = fixture(name)
    A = KPAlgebra(g, "int")
    paths = _paths_upto(g, (2, 2))
    for v in g.vertices:
        for w in g.vertices:
            expected = A.p(v) if v == w else A.zero()
            assert equals(A.p(v) * A.p(w), expected)
    for lam in paths:
        assert equals(A.p(lam.rng) * A.s(lam), A.s(lam))
        assert equals(A.s(lam) * A.p(lam.src), A.s(lam))
        assert equals(A.p(lam.src) * A.st(lam), A.st(lam))
        assert equals(A.st(lam) * A.p(lam.rng), A.st(lam))
        for mu in paths:
            if lam.src == mu.rng:
                lm = g.compose(lam, mu)
                assert equals(A.s(lam) * A.s(mu), A.s(lm))
                assert equals(A.st(mu) * A.st(lam), A.st(lm))
            if lam.degree == mu.degree:
                expected = A.p(lam.src) if lam == mu else A.zero()
                assert equals(A.st(lam) * A.s(mu), expected)
    for v in g.vertices:
        for n in degrees_between(g.zero(), (2, 2)[: g.k]):
            total = A.zero()
            for lam in g.paths_from(v, n):
                total = total + A.s(lam) * A.st(lam)
            assert equals(A.p(v), total)


# --- products of path generators against brute-force extensions --------------------

@pytest.mark.parametrize("name", ["laurent2", "redcycle2"])
def test_path_products_at_every_level(name):
    g = fixture(name)
    A = KPAlgebra(g, "int")
    paths = _paths_upto(g, (2, 2))
    for beta in paths:
        for gamma in paths:
            prod = A.st(beta) * A.s(gamma)
            lo = deg_join(beta.degree, gamma.degree)
            for q in degrees_between(lo, (3, 3)):
                expected = A.zero()
                if beta.rng == gamma.rng:
                    for al in g.paths_from(beta.src, deg_sub(q, beta.degree)):
                        for be in g.paths_from(gamma.src, deg_sub(q, gamma.degree)):
                            if g.compose(beta, al) == g.compose(gamma, be):
                                expected = expected + A.term(al, be)
                assert equals(prod, expected), (beta, gamma, q)


# --- leavitt2 against the independent basis ------------------------------------------

def test_leavitt_equality_matches_basis_oracle(leavitt, rng):
    A = leavitt
    outcomes = set()
    for _ in range(200):
        x = random_element(A, rng, top=(3,), terms=4, coeff=2)
        if rng.random() < 0.5:
            y = expand_uniform(x, (rng.randint(3, 4),))
            if rng.random() < 0.5:
                y = y + A.term("a.b", "b.b")
        else:
            y = random_element(A, rng, top=(3,), terms=4, coeff=2)
        oracle = _leavitt_nf(_words(x)) == _leavitt_nf(_words(y))
        assert equals(x, y) == oracle
        outcomes.add(oracle)
    assert outcomes == {True, False}


def test_leavitt_mul_matches_basis_oracle(leavitt, rng):
    A = leavitt
    for _ in range(150):
        x = random_element(A, rng, top=(3,), terms=3)
        y = random_element(A, rng, top=(3,), terms=3)
        got = _leavitt_nf(_words(mul(x, y)))
        assert got == _leavitt_nf(_leavitt_mul(_words(x), _words(y)))


# --- algebraic properties -------------------------------------------------------------

PROPERTY_FIXTURES = ("laurent2", "leavitt2", "twoblock", "redcycle2")


@pytest.mark.parametrize("name", PROPERTY_FIXTURES)
def test_star_is_anti_multiplicative(name):
    A = KPAlgebra(fixture(name), "int")
    rng = random.Random(name)
    for _ in range(100):
        x, y = random_element(A, rng), random_element(A, rng)
        assert equals(star(mul(x, y)), mul(star(y), star(x)))


@pytest.mark.parametrize("name", PROPERTY_FIXTURES)
def test_grading_respected(name):
    A = KPAlgebra(fixture(name), "int")
    rng = random.Random(name)
    for _ in range(200):
        x, y = random_element(A, rng, terms=1), random_element(A, rng, terms=1)
        (m,) = graded_components(x)
        (n,) = graded_components(y)
        for key in mul(x, y).terms:
            assert component_of(key) == deg_add(m, n)


@pytest.mark.parametrize("name", PROPERTY_FIXTURES)
def test_equals_is_a_congruence(name):
    A = KPAlgebra(fixture(name), "int")
    rng = random.Random(name)
    for _ in range(40):
        x, z = random_element(A, rng), random_element(A, rng)
        x2 = expand_uniform(x, tuple(2 for _ in range(A.graph.k)))
        x3 = canonical_form(x)
        assert equals(x, x) and equals(x, x2) and equals(x2, x) and equals(x2, x3) and equals(x, x3)
        assert equals(add(x, z), add(x2, z))
        assert equals(mul(x, z), mul(x2, z)) and equals(mul(z, x), mul(z, x2))
        assert equals(star(x), star(x2))
        assert equals(mul(mul(x, z), x), mul(x, mul(z, x)))
        assert equals(mul(x, add(z, x)), add(mul(x, z), mul(x, x)))


@pytest.mark.parametrize("name", PROPERTY_FIXTURES)
def test_level_coherence(name):
    A = KPAlgebra(fixture(name), "int")
    g = A.graph
    rng = random.Random(name)
    for _ in range(40):
        x = random_element(A, rng)
        for comp in graded_components(x):
            lo = g.zero()
            for key in x.terms:
                if component_of(key) == comp:
                    lo = deg_join(lo, key[1].degree)
            mid = deg_add(lo, g.unit(1))
            high = deg_add(mid, g.ones())
            once = expand_to_level(x, comp, high)
            twice = expand_to_level(expand_to_level(x, comp, mid), comp, high)
            assert once.terms == twice.terms


@pytest.mark.parametrize("name", PROPERTY_FIXTURES)
def test_compression_recovers_coefficients(name):
    A = KPAlgebra(fixture(name), "int")
    rng = random.Random(name)
    for _ in range(30):
        x = random_element(A, rng, terms=1)
        x = x + random_element(A, rng, terms=1)
        parts = graded_components(x)
        comp = next(iter(parts))
        part = expand_uniform(parts[comp])
        for (a, b), r in part.terms.items():
            assert equals(A.st(a) * part * A.s(b), scale(r, A.p(a.src)))


def test_compress_to_vertex_on_random_leavitt_elements(leavitt, rng):
    A = leavitt
    done = 0
    for _ in range(60):
        x = random_element(A, rng, top=(3,), terms=4)
        if is_zero(x):
            continue
        c = compress_to_vertex(x)
        assert equals(A.st(c.sigma) * x * A.s(c.tau), scale(c.coeff, A.p(c.vertex)))
        assert c.coeff != 0
        done += 1
    assert done > 40


def test_rational_and_modular_coefficients():
    Q = KPAlgebra(fixture("leavitt2"), "rat")
    from fractions import Fraction

    half = Fraction(1, 2)
    x = scale(half, Q.term("a", "a")) + scale(half, Q.term("b", "b"))
    assert equals(scale(2, x), Q.p("v"))
    M = KPAlgebra(fixture("leavitt2"), "mod:4")
    assert is_zero(scale(4, M.p("v")))
    assert not is_zero(scale(2, M.p("v")))
