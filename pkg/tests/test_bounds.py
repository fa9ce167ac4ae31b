import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import graphs
from oracles import brute_embeddings, brute_two_colorable
from triramsey.arrowing import UnsupportedError
from triramsey.bounds import (ForestPattern, Hypergraph, automorphism_count, bound_report,
                              check_forest_copies, clique_ramsey_lower_bound, count_forest_copies, fano_plane,
                              forest_copy_lower_bound, has_property_b, is_proper_two_coloring, kk_clique_bound,
                              leaf_elimination_order, non_two_colorable_exists, property_b_min_edges,
                              property_b_search, small_forests, two_density)
from triramsey.graph import Graph
from triramsey.named import complete, cycle, empty, path, petersen, star


@st.composite
def hypergraphs(draw, b=None, max_m=7, max_edges=8):
    b = draw(st.integers(1, 3)) if b is None else b
    m = draw(st.integers(b, max_m))
    pool = list(combinations(range(m), b))
    edges = draw(st.lists(st.sampled_from(pool), unique=True, max_size=min(max_edges, len(pool))))
    return Hypergraph.from_edges(b, edges, m)


def test_hypergraph_validation():
    with pytest.raises(ValueError):
        Hypergraph.from_edges(3, [(0, 1)])
    with pytest.raises(ValueError):
        Hypergraph(2, 3, (frozenset({0, 1}), frozenset({0, 1})))
    h = fano_plane()
    assert Hypergraph.from_json(h.to_json()) == h


def test_property_b_examples():
    assert has_property_b(Hypergraph.from_edges(2, [(0, 1), (1, 2), (0, 2)])) is None
    assert has_property_b(fano_plane()) is None
    minus = Hypergraph.from_edges(3, list(fano_plane().edges)[:-1], 7)
    col = has_property_b(minus)
    assert col is not None and is_proper_two_coloring(minus, col)


@given(hypergraphs())
def test_property_b_against_enumeration(h):
    col = has_property_b(h)
    assert (col is not None) == brute_two_colorable([tuple(e) for e in h.edges], h.m)
    if col is not None:
        assert is_proper_two_coloring(h, col)


@given(st.data())
def test_few_edges_always_colourable(data):
    b = data.draw(st.integers(1, 3))
    h = data.draw(hypergraphs(b=b, max_edges=2 ** (b - 1) - 1))
    assert has_property_b(h) is not None


@given(hypergraphs(max_m=6), st.data())
def test_adding_a_vertex_keeps_colourability(h, data):
    bigger = Hypergraph(h.b, h.m + 1, h.edges)
    assert (has_property_b(h) is None) == (has_property_b(bigger) is None)


@settings(max_examples=200)
@given(hypergraphs(b=3, max_m=7, max_edges=10))
def test_degree_one_vertex_lemma(h):
    # if H minus e is 2-colourable and some vertex lies only in e, H is 2-colourable too
    for e in h.edges:
        rest = Hypergraph(h.b, h.m, tuple(f for f in h.edges if f != e))
        if has_property_b(rest) is None:
            continue
        if any(h.degree(v) == 1 for v in e):
            assert has_property_b(h) is not None


def test_min_edges():
    assert [property_b_min_edges(b) for b in (1, 2, 3)] == [1, 3, 7]
    res = property_b_search(3)
    assert res.refuted == (4, 5, 6)
    assert res.witness.m == 7 and len(res.witness.edges) == 7
    assert has_property_b(res.witness) is None
    with pytest.raises(UnsupportedError):
        property_b_min_edges(4)


def test_search_agrees_with_enumeration_for_pairs():
    # every 2-uniform hypergraph on 4 vertices with 2 edges is colourable; triangle is the minimum
    for edges in combinations(list(combinations(range(4), 2)), 2):
        assert has_property_b(Hypergraph.from_edges(2, edges, 4)) is not None
    assert non_two_colorable_exists(2, 2) is None
    assert non_two_colorable_exists(2, 3) is not None


def test_kk_bound():
    assert math.isclose(kk_clique_bound(20, 3, 2), 20 ** (2 / 3))
    assert kk_clique_bound(20, 3, 2) <= 15
    assert kk_clique_bound(7, 3, 3) == 7
    assert kk_clique_bound(0, 4, 2) == 0
    with pytest.raises(ValueError):
        kk_clique_bound(3, 2, 3)


def test_clique_ramsey_bounds():
    b = clique_ramsey_lower_bound(3, 3)
    assert (b.b, b.via_mb, b.via_power) == (3, 7.0, 4.0)
    b = clique_ramsey_lower_bound(2, 3)
    assert math.isclose(b.via_mb, 7 ** (2 / 3)) and b.via_power == 2.0
    b = clique_ramsey_lower_bound(2, 2)
    assert (b.via_mb, b.via_power) == (1.0, 1.0)
    b = clique_ramsey_lower_bound(2, 4)
    assert b.flagged and b.via_mb is None and b.via_power == 4.0
    for s, t in [(1, 2), (1, 3), (2, 3), (3, 3)]:
        r = clique_ramsey_lower_bound(s, t)
        assert r.via_mb >= r.via_power


def test_forest_pattern():
    f = ForestPattern.of(path(3))
    assert f.aut == 2
    assert ForestPattern.of(star(3)).aut == 6
    with pytest.raises(ValueError):
        ForestPattern.of(cycle(3))
    order = leaf_elimination_order(path(5))
    pos = {v: i for i, v in enumerate(order)}
    for v in range(5):
        assert sum(1 for u in path(5).neighbors(v) if pos[u] < pos[v]) <= 1


@given(graphs(max_n=6))
def test_automorphisms_divide_factorial(g):
    assert math.factorial(g.n) % automorphism_count(g) == 0


def test_forest_counts_examples():
    p3, s3, k2 = (ForestPattern.of(h) for h in (path(3), star(3), complete(2)))
    assert count_forest_copies(p3, complete(4)) == (24, 12)
    assert count_forest_copies(s3, complete(4))[1] == 4
    assert count_forest_copies(k2, petersen())[1] == 15
    assert count_forest_copies(p3, petersen())[1] == 30
    assert count_forest_copies(p3, complete(2)) == (0, 0)
    assert forest_copy_lower_bound(p3, 3) == 12
    assert forest_copy_lower_bound(s3, 3) == 4
    assert forest_copy_lower_bound(k2, 5) == math.comb(6, 2)


@settings(max_examples=100)
@given(graphs(max_n=7), st.sampled_from(range(22)))
def test_forest_count_against_brute_force(g, idx):
    f = small_forests(5)[idx]
    lab, unl = count_forest_copies(f, g)
    assert lab == brute_embeddings(f.graph, g)
    assert unl * f.aut == lab


def test_isolated_vertices_in_pattern():
    f = ForestPattern.of(Graph(3, [(0, 1)]))
    assert count_forest_copies(f, complete(4))[0] == brute_embeddings(f.graph, complete(4))
    assert count_forest_copies(ForestPattern.of(empty(2)), empty(3)) == (6, 3)


def test_small_forest_catalogue():
    assert [sum(1 for f in small_forests(5) if f.n == n) for n in range(1, 6)] == [1, 2, 3, 6, 10]


@given(graphs(min_n=2, max_n=7), st.sampled_from(range(22)))
def test_forest_copies_against_clique(g, idx):
    if g.min_degree() < 1:
        return
    chk = check_forest_copies(small_forests(5)[idx], g)
    assert chk.holds and chk.reference_matches_bound


def test_forest_copies_examples():
    p3 = ForestPattern.of(path(3))
    chk = check_forest_copies(p3, petersen())
    assert (chk.count, chk.reference) == (30, 12)
    chk = check_forest_copies(p3, complete(4))
    assert chk.count == chk.reference == 12


def test_two_density():
    assert two_density(complete(3)) == 2
    assert two_density(complete(4)) == Fraction(5, 2)
    assert two_density(path(3)) == 1
    assert two_density(complete(2)) == Fraction(1, 2)


def test_bound_report_shape():
    r = bound_report("two_density", Fraction(5, 2), "f", {"graph6": "C~"})
    assert r == {"name": "two_density", "value": "5/2", "formula": "f", "inputs": {"graph6": "C~"}}
