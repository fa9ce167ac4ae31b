import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import graphs
from triramsey.graph import Graph
from triramsey.named import complete, empty, path
from triramsey.probcolor import (ColoringRun, InstanceViolation, analytic_xprime_bound, attempt_coloring,
                                 check_instance, clique_tail_instance, collect_stats, compute_params,
                                 greedy_complete, load_instance, make_instance, monte_carlo,
                                 overlapping_clique_instance, random_partial_color, run_trial, save_instance)

HALF = Fraction(1, 2)


def test_params_examples():
    p = compute_params(HALF, HALF, 1000)
    assert (p.d1, p.s, p.d2) == (125, 250, 1)
    assert math.isclose(p.gamma, 0.5 / 200 * math.exp(-20), rel_tol=1e-12)
    assert math.isclose(p.gamma, 5.15e-12, rel_tol=1e-2)
    p = compute_params(HALF, HALF, 8)
    assert (p.d1, p.s, p.d2) == (1, 2, 1)
    p = compute_params(Fraction(999999, 1000000), Fraction(999999, 1000000), 200)
    assert math.isclose(p.gamma, math.exp(-10) / 200, rel_tol=1e-4) and p.d2 == 1


def test_params_validation_and_override():
    for bad in [(0, HALF, 10), (HALF, 1, 10), (HALF, HALF, 0)]:
        with pytest.raises(ValueError):
            compute_params(*bad)
    p = compute_params("1/2", "1/2", 40, gamma=0.1)
    assert p.gamma_override and p.d2 == 4 and p.color_budget == 36


def test_check_instance_examples():
    d = 40
    k = make_instance(complete(d + 1), range(d + 1), HALF, HALF, d)
    res = check_instance(k)
    assert not res.ok and any(c == "1" for _, c, _ in res.violations)
    assert check_instance(make_instance(empty(10), range(10), HALF, HALF, 4)).ok
    assert check_instance(clique_tail_instance()).ok


def test_disjoint_small_cliques_satisfy_conditions():
    # K_{(1-eps)d+1} pieces: forward degree (1-eps)d, neighbourhood a clique of that size
    d = 20
    edges = []
    for base in range(0, 44, 11):
        edges += [(base + a, base + b) for a in range(11) for b in range(a + 1, 11)]
    g = Graph(44, edges)
    inst = make_instance(g, range(44), HALF, Fraction(1, 10), d)
    assert check_instance(inst).ok


@pytest.mark.parametrize("shift", [3, 5, 9])
def test_overlapping_generator_is_valid(shift):
    inst = overlapping_clique_instance(40, HALF, HALF, cliques=5, clique_size=9, shift=shift)
    assert check_instance(inst).ok
    rec = run_trial(inst, 0)
    assert rec.partial_proper and rec.identity_ok and rec.final_ok


def test_single_colour_forces_uncolouring():
    g = Graph(3, [(0, 1)])
    inst = make_instance(g, [0, 1, 2], HALF, HALF, 2)  # s = 1, d1 = 1: A = {0, 1}
    assert inst.params.s == 1 and inst.A == (0, 1)
    run = random_partial_color(inst, 5)
    assert run.partial[0] == 0 and run.partial[1] is None


def test_independent_set_keeps_everything():
    inst = make_instance(empty(12), range(12), HALF, HALF, 8)
    run = random_partial_color(inst, 1)
    assert all(c is not None for c in run.partial.values())


def test_stats_smallest_cases():
    # B-vertex 2 sees two non-adjacent vertices of A
    g = Graph(3, [(0, 2), (1, 2)])
    inst = make_instance(g, [0, 1, 2], HALF, HALF, 4)
    assert inst.B == (2,)
    run = ColoringRun(0, {0: 0, 1: 0}, {0: 0, 1: 0})
    st_ = collect_stats(run, inst)[2]
    assert (st_.AT, st_.Del, st_.X, st_.X_prime) == (1, 0, 1, 1)
    # clique neighbourhood: nothing assigned twice to a non-adjacent pair
    g = Graph(3, [(0, 1), (0, 2), (1, 2)])
    inst = make_instance(g, [0, 1, 2], HALF, HALF, 4)
    run = ColoringRun(0, {0: 0, 1: 0}, {0: 0, 1: None})
    assert collect_stats(run, inst)[2].AT == 0


def test_deleted_colour_counts():
    g = Graph(4, [(0, 3), (1, 3), (2, 3), (1, 2)])
    inst = make_instance(g, [0, 1, 2, 3], HALF, HALF, 4)
    run = ColoringRun(0, {0: 0, 1: 0, 2: 0}, {0: 0, 1: 0, 2: None})
    s = collect_stats(run, inst)[3]
    assert (s.AT, s.Del, s.X, s.X_prime) == (1, 1, 0, 0)


def test_greedy_examples():
    inst = make_instance(empty(6), range(6), HALF, HALF, 4)
    run = ColoringRun(0, {}, {v: None for v in inst.A})
    col = greedy_complete(run, inst)
    assert col is not None and set(col.assignment) == {0}
    d = 6
    k = make_instance(complete(d + 1), range(d + 1), HALF, HALF, d)
    run = ColoringRun(0, {}, {v: None for v in k.A})
    assert greedy_complete(run, k, colors=d) is None
    assert run.failure[0] == d


def _random_instance(g):
    d = max(1, max((g.degree(v) for v in range(g.n)), default=1))
    return make_instance(g, range(g.n), HALF, HALF, d)


@settings(max_examples=80)
@given(graphs(min_n=1, max_n=12), st.integers(0, 2 ** 32))
def test_trial_invariants_on_random_graphs(g, seed):
    inst = _random_instance(g)
    rec = run_trial(inst, seed)
    assert rec.partial_proper and rec.identity_ok and rec.final_ok
    assert not rec.disjunction_failure


def test_seed_determinism():
    inst = clique_tail_instance()
    a = attempt_coloring(inst, 42)
    b = attempt_coloring(inst, 42)
    assert a.partial == b.partial and a.final == b.final
    assert attempt_coloring(inst, 43).assigned != a.assigned


def test_refuses_invalid_instances():
    d = 10
    dense = make_instance(complete(d + 1), range(d + 1), HALF, HALF, d)
    with pytest.raises(InstanceViolation):
        attempt_coloring(dense, 0)
    with pytest.raises(InstanceViolation):
        monte_carlo(dense, 3)


def test_forest_always_succeeds():
    inst = make_instance(path(30), range(30), HALF, HALF, 4)
    mc = monte_carlo(inst, 50, seed=0)
    assert mc.success_rate == 1.0


def test_monte_carlo_independent_of_jobs():
    inst = clique_tail_instance()
    a = monte_carlo(inst, 40, seed=3, jobs=1)
    b = monte_carlo(inst, 40, seed=3, jobs=3)
    assert a.records == b.records
    assert a.to_csv() == b.to_csv()
    assert a.to_csv().splitlines()[0] == "seed,min_X_v,colors_used,success"


def test_fixture_summary():
    inst = clique_tail_instance()
    mc = monte_carlo(inst, 300, seed=0)
    d = mc.to_dict()
    assert d["partial_always_proper"] and d["identities_hold"] and d["final_colorings_valid"]
    bound = analytic_xprime_bound(inst.params)
    assert all(m >= bound - 3 * se for m, se in mc.x_prime_mean_se())


def test_instance_files_roundtrip(tmp_path):
    inst = clique_tail_instance(gamma=0.1)
    save_instance(inst, tmp_path / "fix.g6")
    again = load_instance(tmp_path / "fix.g6")
    assert again.graph == inst.graph and again.order.order == inst.order.order
    assert again.params == inst.params
