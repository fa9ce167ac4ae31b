from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
from hypothesis import given

from conftest import graphs
from oracles import brute_chromatic, brute_triangles
from triramsey.graph import Graph, is_independent, join
from triramsey.named import complete, cycle, petersen, wheel
from triramsey.peeling import (ModifiedWeightConfig, check_small_graph_triangles, check_support_edge_ratio,
                               check_triangle_edge_bound, excess_identity_check, excess_report, gallai_check,
                               gallai_join_decompose, max_modified_weight_set, min_triangle_support_scan,
                               modified_weight_peel, trace_to_dict, turan_peel, verify_trace)
from triramsey.solvers import chromatic_number, is_critical


@pytest.mark.parametrize("r", range(1, 8))
def test_complete_graph_peel_is_tight(r):
    g = complete(r)
    tr = turan_peel(g)
    assert tr.ks == [1] * r
    rep = excess_report(tr)
    assert all(x.excess == 0 for x in rep.vertices.values())
    chk = excess_identity_check(g, tr, rep)
    assert chk.tight


def test_pentagon_peel():
    g = cycle(5)
    tr = turan_peel(g)
    assert tr.r == 3
    s0, s1, s2 = tr.steps
    assert s0.I == {0, 2}
    assert s1.G == {1, 3, 4} and s1.G_prime == {3, 4} and s1.I == {3}
    assert s2.I == {4}
    # G_1 is an edge plus an isolated vertex
    assert tr.step_graph(1, prime=False).num_edges == 1
    rep = excess_report(tr)
    assert rep.total == 0 and excess_identity_check(g, tr, rep).tight


def test_petersen_excess_values():
    g = petersen()
    tr = turan_peel(g)
    assert tr.steps[0].G_prime == frozenset(range(5, 10))
    assert tr.steps[0].k == 2
    rep = excess_report(tr)
    assert {rep.vertices[v].excess for v in range(5)} == {Fraction(3, 4)}
    assert all(rep.vertices[v].excess == 0 for v in range(5, 10))
    chk = excess_identity_check(g, tr, rep)
    assert chk.edges_lhs == 15 and chk.edges_rhs == Fraction(25, 2)
    assert chk.chain_lhs == 5 and chk.chain_rhs == Fraction(15, 4)


@given(graphs(min_n=1, max_n=8))
def test_trace_invariants(g):
    tr = turan_peel(g)
    assert verify_trace(tr) == []
    assert tr.r == brute_chromatic(g)
    rep = excess_report(tr)
    assert rep.all_nonnegative() and rep.bounds_respected()
    assert excess_identity_check(g, tr, rep).holds
    # every vertex leaves the process exactly once
    assert set(rep.vertices) == set(range(g.n))


@given(graphs(min_n=1, max_n=8))
def test_triangle_edge_bound(g):
    chk = check_triangle_edge_bound(g)
    r = brute_chromatic(g)
    assert chk.lhs == brute_triangles(g) + Fraction(g.num_edges, 2)
    assert chk.rhs == comb(r, 3) + Fraction(comb(r, 2), 2)
    assert chk.holds


def test_triangle_edge_bound_tight_on_cliques():
    chk = check_triangle_edge_bound(complete(6))
    assert chk.lhs == chk.rhs == Fraction(55, 2)


def test_small_graph_triangles():
    c = check_small_graph_triangles(wheel(5))
    assert (c.t, c.bound, c.holds, c.applicable) == (5, 4, True, True)
    assert not check_small_graph_triangles(cycle(5)).applicable
    assert check_small_graph_triangles(complete(5)).holds


def test_gallai_examples():
    a, b = gallai_join_decompose(complete(5))
    assert a == complete(1) and b == complete(4)
    a, b = gallai_join_decompose(wheel(5))
    assert a == complete(1) and b == cycle(5)
    assert gallai_join_decompose(join(cycle(5), complete(1)))[1] == cycle(5)
    assert gallai_join_decompose(cycle(7)) is None
    assert gallai_check(wheel(5)).holds and gallai_check(wheel(5)).applicable
    assert not gallai_check(cycle(5)).applicable


@given(graphs(min_n=1, max_n=7))
def test_gallai_property(g):
    r = chromatic_number(g)[0]
    res = gallai_check(g, r)
    if is_critical(g, r) and g.n <= 2 * r - 2:
        assert res.applicable and res.decomposed and res.factors_critical
    else:
        assert not res.applicable


def test_modified_peel_stop_rules():
    half = Fraction(1, 2)
    assert modified_weight_peel(complete(6), ModifiedWeightConfig(half, 4)).stop_reason == "ii"
    tr = modified_weight_peel(cycle(5), ModifiedWeightConfig(half, 1))
    assert (tr.stop_reason, tr.stop_index) == ("i", 3)
    tr = modified_weight_peel(cycle(5), ModifiedWeightConfig(Fraction(9, 10), 1))
    assert (tr.stop_reason, tr.stop_index) == ("iii", 0)
    assert modified_weight_peel(complete(1), ModifiedWeightConfig(half, 1)).stop_reason == "i"
    assert modified_weight_peel(complete(1), ModifiedWeightConfig(half, 3)).stop_reason == "ii"


def test_modified_weight_config_validation():
    with pytest.raises(ValueError):
        ModifiedWeightConfig(Fraction(1), 1)
    with pytest.raises(ValueError):
        ModifiedWeightConfig(Fraction(1, 2), 0)


def _brute_best_weight(g, threshold, boost):
    from triramsey.solvers import max_clique_mask
    big = {u for u in range(g.n) if max_clique_mask(g.adj, g.adj[u]).bit_count() + 1 >= threshold}
    best = Fraction(0)
    for k in range(1, g.n + 1):
        for s in combinations(range(g.n), k):
            mask = sum(1 << v for v in s)
            if is_independent(g.adj, mask):
                w = Fraction(k) * (boost if big & set(s) else 1)
                best = max(best, w)
    return best


@given(graphs(min_n=1, max_n=8))
def test_max_modified_weight_is_optimal(g):
    boost = Fraction(11, 10)
    for threshold in (2, 3):
        chosen, big = max_modified_weight_set(g.adj, g.vertex_mask, threshold, boost)
        assert is_independent(g.adj, chosen)
        w = chosen.bit_count() * (boost if chosen & big else 1)
        assert w == _brute_best_weight(g, threshold, boost)


@given(graphs(min_n=1, max_n=7))
def test_modified_trace_steps_are_valid(g):
    tr = modified_weight_peel(g, ModifiedWeightConfig(Fraction(1, 2), Fraction(1, 2)))
    assert verify_trace(tr) == []


def test_triangle_support_scan():
    assert min_triangle_support_scan([complete(4)], 4) == 0
    assert min_triangle_support_scan([cycle(5)], 3) == 1
    with pytest.raises(ValueError):
        min_triangle_support_scan([], 3)


@given(graphs(max_n=8))
def test_support_edge_ratio(g):
    for t in (3, 4, 5):
        res = check_support_edge_ratio(g, t)
        assert res is None or res


def test_trace_export():
    tr = turan_peel(cycle(5))
    d = trace_to_dict(tr, excess_report(tr))
    assert d["graph6"] == cycle(5).graph6 and d["r"] == 3
    assert [s["k_i"] for s in d["steps"]] == [2, 1, 1]
    assert d["total_excess"] == "0"


def test_empty_graph_rejected():
    with pytest.raises(ValueError):
        turan_peel(Graph(0))
