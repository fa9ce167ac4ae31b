import pytest
from hypothesis import given

from conftest import graphs
from oracles import brute_chromatic, brute_clique, brute_independence
from triramsey.corpus import small_graphs
from triramsey.named import complete, cycle, empty, grotzsch, petersen, wheel
from triramsey.solvers import (PreconditionError, chromatic_number, clique_number, critical_subgraph,
                               independence_number, is_critical, is_k_colorable, max_clique, max_independent_set,
                               turan_bound_check)


@given(graphs(max_n=8))
def test_chromatic_against_brute_force(g):
    k, col = chromatic_number(g)
    assert k == brute_chromatic(g)
    assert col.is_proper(g) and col.k == k


@given(graphs(max_n=9))
def test_clique_and_independence(g):
    cl, w = max_clique(g)
    ind, a = max_independent_set(g)
    assert w == brute_clique(g) == len(cl)
    assert a == brute_independence(g) == len(ind)
    assert all(g.has_edge(u, v) for u in cl for v in cl if u < v)
    assert not any(g.has_edge(u, v) for u in ind for v in ind if u < v)


def test_lexicographic_tie_break():
    # two disjoint triangles: the one on the smaller labels wins
    g = cycle(3)
    from triramsey.graph import disjoint_union
    h = disjoint_union(g, g)
    assert max_clique(h)[0] == frozenset({0, 1, 2})


def test_every_graph_up_to_six_vertices():
    seen = 0
    for g in small_graphs(6):
        assert chromatic_number(g)[0] == brute_chromatic(g)
        seen += 1
    assert seen == 1 + 2 + 4 + 11 + 34 + 156


@pytest.mark.parametrize("g, chi, omega, alpha", [
    (petersen(), 3, 2, 4), (grotzsch(), 4, 2, 5), (complete(5), 5, 5, 1),
    (cycle(7), 3, 2, 3), (empty(4), 1, 1, 4), (wheel(5), 4, 3, 2),
])
def test_named_values(g, chi, omega, alpha):
    assert chromatic_number(g)[0] == chi
    assert clique_number(g) == omega
    assert independence_number(g) == alpha


def test_k_colorable():
    assert is_k_colorable(cycle(5), 2) is None
    c = is_k_colorable(cycle(5), 3)
    assert c is not None and c.is_proper(cycle(5))
    assert is_k_colorable(empty(0), 0) is not None
    with pytest.raises(ValueError):
        is_k_colorable(cycle(3), -1)


@given(graphs(min_n=1, max_n=8))
def test_critical_subgraph_is_critical(g):
    r = chromatic_number(g)[0]
    w = critical_subgraph(g, r)
    h = w.graph(g)
    assert chromatic_number(h)[0] == r
    assert is_critical(h, r)


def test_critical_examples():
    assert is_critical(complete(4))
    assert is_critical(cycle(5))
    assert not is_critical(petersen())
    assert is_critical(grotzsch())
    assert critical_subgraph(petersen(), 3).subgraph == frozenset(range(5, 10))
    with pytest.raises(PreconditionError):
        critical_subgraph(cycle(4), 3)


@given(graphs(min_n=1, max_n=9))
def test_turan_bound(g):
    assert turan_bound_check(g).holds


def test_turan_tight_on_cliques():
    chk = turan_bound_check(complete(6))
    assert chk.lhs == chk.rhs == 15
