import json
import random

import pytest
from hypothesis import given, settings

from conftest import graphs
from oracles import sympy_rank
from porcupine import linalg
from porcupine.algebra import Element, Monomial, degree, parse_element
from porcupine.graph import Bundle, Graph, GraphError, Path
from porcupine.ideal import (
    MonomialKind,
    SpanningMonomial,
    breaking_vertices,
    hereditary_saturated_closure,
    ideal_spanning_monomials,
    make_admissible_pair,
)
from porcupine.iso import (
    DepthInsufficient,
    Phi,
    PathPairs,
    drop_gap_projection,
    factorize_into_H,
    factorize_into_S,
    injectivity_rank,
    normal_monomials,
    phi_edge,
    phi_element,
    phi_vertex,
    retarget_spine_edge,
    surjectivity_witness,
    swap_edge_images,
    verify_graded_star_iso,
)
from porcupine.spines import build_porcupine, spine_edge_name, spine_vertex_name


@pytest.fixture
def tp(toeplitz_pair):
    return toeplitz_pair, build_porcupine(toeplitz_pair, 4)


@pytest.fixture
def xp(ie_pair):
    return ie_pair, build_porcupine(ie_pair, 4, 2)


def w(g, text):
    return spine_vertex_name(g.parse_path(text))


def f(g, text):
    return spine_edge_name(g.parse_path(text))


def test_phi_vertex_examples(tp, xp, T, X):
    pair, porc = tp
    assert phi_vertex(pair, porc, w(T, "eg")) == parse_element(T, "eg.eg'")
    assert phi_vertex(pair, porc, "v") == parse_element(T, "v")
    pair, porc = xp
    assert phi_vertex(pair, porc, "w") == parse_element(X, "w - e2.e2'")
    assert phi_vertex(pair, porc, w(X, "e1")) == parse_element(X, "e1.e1' - e1e2.e1e2'")
    with pytest.raises(GraphError):
        phi_vertex(pair, porc, "a")


def test_phi_edge_examples(tp, xp, T, X):
    pair, porc = tp
    assert phi_edge(pair, porc, f(T, "g")) == parse_element(T, "g")
    assert phi_edge(pair, porc, f(T, "eg")) == parse_element(T, "eg.g'")
    pair, porc = xp
    assert phi_edge(pair, porc, f(X, "e1")) == parse_element(X, "e1") * pair.gap("w")
    q0 = porc.graph.edge("q", 0)
    assert phi_edge(pair, porc, q0) == Element.edge(X, X.edge("q", 0))
    assert phi_edge(pair, porc, f(X, "e1e2e3")) == parse_element(X, "e1e2e3.e2e3'")


def test_edge_images_degree_one(xp):
    pair, porc = xp
    phi = Phi(porc)
    for e in porc.graph.edges(porc.index_bound):
        assert degree(phi.edge(e)) == 1


def test_phi_element_examples(tp, T):
    pair, porc = tp
    P = porc.graph
    x = Element.path(P, P.path(P.edge(f(T, "eg")), P.edge(f(T, "g"))))
    assert phi_element(pair, porc, x) == parse_element(T, "eg")
    assert phi_element(pair, porc, Element.zero(P)) == 0
    s = Element.vertex(P, "v") + Element.vertex(P, w(T, "g"))
    assert phi_element(pair, porc, s) == parse_element(T, "v + g.g'")
    with pytest.raises(GraphError):
        phi_element(pair, porc, Element.vertex(T, "w"))


def test_ck2_at_spine_vertices(tp, xp):
    for pair, porc in (tp, xp):
        phi = Phi(porc)
        for v, p in porc.vertex_path.items():
            g = porc.spine_edge(p)
            assert phi.edge(g) * phi.edge(g).star() == phi.vertex(v)
            assert phi.edge(g).star() * phi.edge(g) == phi.vertex(porc.graph.bundle(g.bundle).dst)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_factorize_toeplitz_power(tp, T, n):
    pair, porc = tp
    p = T.parse_path("e" * (n - 1) + "g")
    m = factorize_into_H(pair, porc, p)
    assert len(m) == n
    assert [e.bundle for e in m.edges] == [f(T, "e" * (n - 1 - j) + "g") for j in range(n)]
    assert Phi(porc).path(m) == Element.path(T, p)


def test_factorize_cases(xp, X):
    pair, porc = xp
    phi = Phi(porc)
    # case (i): last source outside H is b, not in S
    p = X.parse_path("e1e2e3")
    m = factorize_into_H(pair, porc, p)
    assert [e.bundle for e in m.edges] == [f(X, "e1e2e3"), f(X, "e2e3"), f(X, "e3")]
    assert phi.path(m) == Element.path(X, p)
    # case (ii): single edge out of w in S
    p = X.parse_path("q[1]")
    assert factorize_into_H(pair, porc, p) == Path.of([porc.graph.edge("q", 1)])
    # case (iii): e1 then q, the spine chain stops before w
    p = X.parse_path("e1q[0]")
    m = factorize_into_H(pair, porc, p)
    assert [e.bundle for e in m.edges] == [f(X, "e1"), "q"]
    assert phi.path(m) == Element.path(X, p)
    # path starting in H
    assert factorize_into_H(pair, porc, Path.vertex("v")) == Path.vertex("v")
    with pytest.raises(ValueError):
        factorize_into_H(pair, porc, X.parse_path("e1"))


def test_factorize_into_S(xp, X):
    pair, porc = xp
    m = factorize_into_S(pair, porc, X.parse_path("e1"))
    assert [e.bundle for e in m.edges] == [f(X, "e1")]
    assert Phi(porc).path(m) == parse_element(X, "e1") * pair.gap("w")
    with pytest.raises(ValueError):
        factorize_into_S(pair, porc, Path.vertex("w"))
    with pytest.raises(ValueError):
        factorize_into_S(pair, porc, X.parse_path("e3"))


def test_factorize_into_S_two_steps():
    g = Graph(("a", "b", "s", "h", "x"), (
        Bundle("ab", "a", "b"), Bundle("bs", "b", "s"),
        Bundle("q", "s", "h", "inf"), Bundle("sx", "s", "x"),
    ))
    pair = make_admissible_pair(g, {"h"}, {"s"})
    porc = build_porcupine(pair, 3)
    p = g.parse_path("abbs")
    m = factorize_into_S(pair, porc, p)
    assert [e.bundle for e in m.edges] == [f(g, "abbs"), f(g, "bs")]
    assert Phi(porc).path(m) == Element.path(g, p) * pair.gap("s")
    assert pair.gap("s") == parse_element(g, "s - sx.sx'")


def test_depth_insufficient(toeplitz_pair, T):
    porc = build_porcupine(toeplitz_pair, 2)
    with pytest.raises(DepthInsufficient):
        factorize_into_H(toeplitz_pair, porc, T.parse_path("eeg"))


def test_depth_insufficient_omega_index(ie_pair, X):
    porc = build_porcupine(ie_pair, 3, 1)
    with pytest.raises(DepthInsufficient):
        factorize_into_H(ie_pair, porc, X.parse_path("q[4]"))


def test_surjectivity_witnesses(xp, X):
    pair, porc = xp
    phi = Phi(porc)
    for sm in ideal_spanning_monomials(pair, 3, 2):
        m = surjectivity_witness(pair, porc, sm)
        assert phi.monomial(m) == sm.element(pair), sm


def test_multiplicativity_random_pairs(tp, xp):
    rng = random.Random(0)
    for pair, porc in (tp, xp):
        phi = Phi(porc)
        pool = PathPairs(porc.graph, porc.graph.vertices, 3, porc.index_bound)
        for (p1, q1), (p2, q2) in zip(pool.sample(rng, 200, True), pool.sample(rng, 200, True)):
            a = Element(porc.graph, {Monomial(p1, q1): 1})
            b = Element(porc.graph, {Monomial(p2, q2): 1})
            assert phi(a * b) == phi(a) * phi(b)
            assert phi(a.star()) == phi(a).star()


def test_path_pairs_matches_normal_monomials(X):
    pp = PathPairs(X, X.vertices, 2, 2)
    listed = normal_monomials(X, 2, 2)
    assert len(set(listed)) == len(listed)
    assert len(pp) >= len(listed)
    assert all(pp.is_normal(m.p, m.q) for m in listed)
    assert all(Element.monomial(X, m.p, m.q) == Element(X, {m: 1}) for m in listed)


def test_injectivity_rank_against_sympy(tp, xp):
    for pair, porc in (tp, xp):
        phi = Phi(porc)
        monos = normal_monomials(porc.graph, 2, porc.index_bound)
        rows = [phi.monomial(m).terms for m in monos]
        r = linalg.rank(rows)
        assert r == sympy_rank(rows) == len(monos)
        assert injectivity_rank(phi, 2) == (len(monos), r)


def test_linalg_rank_dependent_rows():
    rows = [{"a": 1, "b": 2}, {"a": 2, "b": 4}, {"c": 1}]
    assert linalg.rank(rows) == sympy_rank(rows) == 2
    assert linalg.rank([]) == 0


@pytest.mark.parametrize("which", ["toeplitz", "ie"])
def test_verify_examples(tp, xp, which):
    pair, _ = tp if which == "toeplitz" else xp
    rep = verify_graded_star_iso(pair, 4, 100, 0, 2 if which == "ie" else None)
    assert rep.passed, rep.to_text()
    assert rep.coverage() == 1.0
    assert rep.checks["vertex-nonvanishing"].checked == len(build_porcupine(pair, 4, rep.index_bound).graph.vertices)


def test_verify_deterministic(ie_pair):
    a = verify_graded_star_iso(ie_pair, 3, 40, 7).to_json()
    b = verify_graded_star_iso(ie_pair, 3, 40, 7).to_json()
    assert a == b
    doc = json.loads(a)
    assert doc["status"] == "pass" and set(doc["checks"]) >= {"axioms", "degrees", "star", "surjectivity"}


def test_verify_empty_pair(T):
    rep = verify_graded_star_iso(make_admissible_pair(T, set()), 3, 10, 0)
    assert rep.passed and rep.coverage() == 1.0


def test_verify_truncation_skips_not_fails(toeplitz_pair):
    # index bound is irrelevant here; depth 1 cannot factor eg but that is not a failure
    rep = verify_graded_star_iso(toeplitz_pair, 1, 10, 0)
    assert rep.passed


@pytest.mark.parametrize("mutate", [drop_gap_projection, swap_edge_images, retarget_spine_edge])
def test_mutations_detected(ie_pair, mutate):
    porc = build_porcupine(ie_pair, 4, 2)
    rep = verify_graded_star_iso(ie_pair, 4, 100, 0, 2, phi=mutate(porc))
    assert not rep.passed
    bad = rep.failures[0]
    assert bad.at and bad.witness
    assert "FAIL" in rep.to_text()


def test_mutation_needs_material(toeplitz_pair):
    porc = build_porcupine(toeplitz_pair, 1)
    with pytest.raises(ValueError):
        drop_gap_projection(porc)
    with pytest.raises(ValueError):
        swap_edge_images(porc)
    with pytest.raises(ValueError):
        retarget_spine_edge(porc)


def _pairs(g, limit=4):
    out = []
    for k in range(len(g.vertices) + 1):
        H = hereditary_saturated_closure(g, g.vertices[:k])
        B = sorted(breaking_vertices(g, H))
        for S in ([], B):
            pair = make_admissible_pair(g, H, S)
            if pair not in out:
                out.append(pair)
    return out[:limit]


@settings(max_examples=30)
@given(graphs(max_vertices=4, max_bundles=5))
def test_verify_random_graphs(g):
    for pair in _pairs(g):
        rep = verify_graded_star_iso(pair, 2, 10, 0)
        assert rep.passed, rep.to_text()


@settings(max_examples=30)
@given(graphs(max_vertices=4, max_bundles=5))
def test_factorizations_preserve_length(g):
    for pair in _pairs(g):
        porc = build_porcupine(pair, 3)
        phi = Phi(porc)
        for sm in ideal_spanning_monomials(pair, 2, 2)[:60]:
            try:
                m = surjectivity_witness(pair, porc, sm)
            except DepthInsufficient:
                continue
            assert len(m.p) == len(sm.p) and len(m.q) == len(sm.q)
            assert phi.monomial(m) == sm.element(pair)


def test_gap_kind_witness_uses_vertex(ie_pair):
    porc = build_porcupine(ie_pair, 2, 2)
    sm = SpanningMonomial(MonomialKind.GAP_AT_S, Path.vertex("w"), Path.vertex("w"))
    assert surjectivity_witness(ie_pair, porc, sm) == Monomial(Path.vertex("w"), Path.vertex("w"))
