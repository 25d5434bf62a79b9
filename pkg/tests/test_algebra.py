import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import graphs
from oracles import as_pq_map, element_pq_map, rewrite, word_of_monomial
from porcupine.algebra import (
    Degree,
    Element,
    Monomial,
    check_ck_family,
    degree,
    format_element,
    homogeneous_components,
    multiply,
    normal_form,
    parse_element,
    star,
)
from porcupine.catalog import infinite_emitter, toeplitz
from porcupine.graph import OMEGA, Bundle, Graph, GraphError, Path
from porcupine.iso import normal_monomials
from porcupine.ideal import make_admissible_pair


def el(g, text):
    return parse_element(g, text)


def test_ck1(T):
    e = T.edge("e")
    assert normal_form(T, [(1, [("*", e), e])]) == el(T, "w")
    assert normal_form(T, [(1, [("*", e), T.edge("g")])]) == 0


def test_ck2_sum(T):
    e, g = T.edge("e"), T.edge("g")
    x = normal_form(T, [(1, [e, ("*", e)]), (1, [g, ("*", g)])])
    assert x == el(T, "w")
    # oracle: naive rewriting of the same two words
    ref = rewrite(T, {(("e", e), ("s", e)): 1, (("e", g), ("s", g)): 1})
    assert as_pq_map(ref) == element_pq_map(x)


def test_gap_idempotent(ie_pair):
    wH = ie_pair.gap("w")
    assert wH * wH == wH


def test_multiply_examples(T):
    assert el(T, "eg.g'") * el(T, "g") == el(T, "eg")
    assert el(T, "v") * el(T, "w") == 0
    assert el(T, "w") * el(T, "w") == el(T, "w")


def test_incomposable_is_zero(T):
    assert el(T, "g") * el(T, "e") == 0


def test_star(T, ie_pair):
    x = el(T, "eg")
    assert star(x) == Element(T, {Monomial(Path.vertex("v"), T.parse_path("eg")): 1})
    assert star(ie_pair.gap("w")) == ie_pair.gap("w")


def test_degree(T):
    assert degree(el(T, "eg.g'")) == 1
    assert degree(el(T, "v + g")) is Degree.INHOMOGENEOUS
    assert degree(Element.zero(T)) is Degree.ZERO


def test_components(T):
    x = el(T, "v + g")
    comps = homogeneous_components(x)
    assert comps == {0: el(T, "v"), 1: el(T, "g")}
    assert homogeneous_components(el(T, "eg.g'")).keys() == {1}


def test_text_syntax(T, X):
    assert format_element(el(T, "3/2*eg.g' + 1*v")) == "v + 3/2*e - 3/2*ee.e'"
    assert el(T, "g'") == star(el(T, "g"))
    assert el(T, "-2*e.e' - v") == el(T, "v") * -1 + el(T, "e.e'") * -2
    # w is an infinite emitter: no CK2 there, q[3] q[3]* stays
    assert format_element(el(X, "e1q[3].q[3]'")) == "e1q[3].q[3]'"
    assert el(X, "q[3]'.q[3]") == el(X, "v")
    assert el(T, "0") == 0
    with pytest.raises(GraphError):
        el(T, "zz")


# -- properties -------------------------------------------------------------------


def _pool(g, L=2, ib=2):
    return normal_monomials(g, L, ib)


def random_element(g, rng, pool, n=3):
    return Element(g, {rng.choice(pool): Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(n)})


RING_GRAPHS = [toeplitz(), infinite_emitter(),
               Graph(("u",), (Bundle("a", "u", "u"), Bundle("b", "u", "u"))),
               Graph(("u", "x"), (Bundle("m", "u", "x", 2), Bundle("l", "x", "u"), Bundle("q", "x", "x", OMEGA)))]


@pytest.mark.parametrize("g", RING_GRAPHS)
def test_ring_laws(g):
    rng = random.Random(3)
    pool = _pool(g, 3)
    for _ in range(200):
        a, b, c = (random_element(g, rng, pool) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) * c == a * c + b * c
        assert star(a * b) == star(b) * star(a)
        assert star(star(a)) == a
        assert sum(homogeneous_components(a).values(), Element.zero(g)) == a


@pytest.mark.parametrize("g", RING_GRAPHS)
def test_grading_law(g):
    rng = random.Random(5)
    pool = _pool(g, 3)
    for _ in range(300):
        x, y = Element(g, {rng.choice(pool): 1}), Element(g, {rng.choice(pool): 1})
        xy = x * y
        if xy:
            assert degree(xy) == degree(x) + degree(y)
        for dx, cx in homogeneous_components(x + y).items():
            for dy, cy in homogeneous_components(x * 2 + y).items():
                prod = cx * cy
                assert not prod or degree(prod) == dx + dy


@given(graphs(max_vertices=3, max_bundles=4), st.integers(0, 10**6))
def test_normal_form_idempotent_and_text_roundtrip(g, seed):
    pool = _pool(g, 2)
    if not pool:
        return
    rng = random.Random(seed)
    x = random_element(g, rng, pool, 4)
    y = random_element(g, rng, pool, 2)
    prod = x * y
    # every stored monomial is already normal: re-reducing changes nothing
    again = sum((Element.monomial(g, m.p, m.q, c) for m, c in prod.terms.items()), Element.zero(g))
    assert again == prod
    assert parse_element(g, format_element(prod)) == prod


@settings(max_examples=40)
@given(graphs(max_vertices=3, max_bundles=4), st.integers(0, 10**6))
def test_multiply_matches_rewriter_random_order(g, seed):
    """Confluence in practice: any rewrite order gives the prefix-product result."""
    pool = _pool(g, 2)
    if not pool:
        return
    rng = random.Random(seed)
    for _ in range(20):
        a, b = rng.choice(pool), rng.choice(pool)
        word = word_of_monomial(a.p, a.q) + word_of_monomial(b.p, b.q)
        ref = rewrite(g, {word: 1}, strategy="random", rng=rng)
        got = multiply(Element(g, {a: 1}), Element(g, {b: 1}))
        assert as_pq_map(ref) == element_pq_map(got)


def _length_measure(x):
    return max((len(m.p) + len(m.q) for m in x.terms), default=0)


@given(graphs(max_vertices=3, max_bundles=4), st.integers(0, 10**6))
def test_rewriting_measure_bound(g, seed):
    """Reducing p q* never produces monomials longer than the input."""
    pool = _pool(g, 3)
    if not pool:
        return
    rng = random.Random(seed)
    for _ in range(10):
        a, b = rng.choice(pool), rng.choice(pool)
        if a.p.end != b.p.end:
            continue
        x = Element.monomial(g, a.p + Path.vertex(a.p.end), b.p)
        assert _length_measure(x) <= len(a.p) + len(b.p)


# -- Cuntz-Krieger family checks --------------------------------------------------------


def test_identity_assignment_is_ck_family(T, X):
    for g in (T, X):
        rep = check_ck_family(g, lambda v: Element.vertex(g, v), lambda e: Element.edge(g, e))
        assert rep.ok, rep.failures
        assert rep.checked["CK2"] == sum(g.is_regular(v) for v in g.vertices)


def test_swapped_assignment_fails_ck1():
    g = Graph(("u",), (Bundle("a", "u", "u"), Bundle("b", "u", "u")))
    a, b = g.edge("a"), g.edge("b")
    swap = {a: Element.edge(g, b), b: Element.edge(g, a)}
    ghosts = {a: Element.ghost(g, a), b: Element.ghost(g, b)}
    rep = check_ck_family(g, lambda v: Element.vertex(g, v), swap.__getitem__, ghosts.__getitem__)
    assert not rep.ok
    f = next(f for f in rep.failures if f.axiom == "CK1")
    assert f.generators and f.difference != "0"
