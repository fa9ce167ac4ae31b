"""Randomised partial colouring of degenerate, locally sparse graphs.

One attempt colours the early part ``A`` of a degeneracy order uniformly with
``s`` colours, uncolours the later endpoint of every monochromatic edge,
records per-vertex statistics for the tail ``B``, and finishes with a greedy
colouring in order using at most ``d - d2`` colours.

Randomness comes from a counter-based Philox stream keyed by the trial seed;
draw ``v`` always colours vertex ``v``, so results do not depend on evaluation
order or on how trials are spread over worker processes.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb
from pathlib import Path

import numpy as np

from .graph import DegeneracyOrder, Graph, edges_within, iter_bits, parse_graph6, emit_graph6
from .solvers import ProperColoring


class InstanceViolation(ValueError):
    def __init__(self, violations):
        super().__init__(f"instance violates the degeneracy and sparsity conditions: {violations[:5]}")
        self.violations = violations


@dataclass(frozen=True)
class ColoringParams:
    eps: Fraction
    delta: Fraction
    d: int
    gamma: float
    d1: int
    s: int
    d2: int
    gamma_override: bool = False

    @property
    def color_budget(self) -> int:
        return self.d - self.d2


def _rational(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x)) if isinstance(x, str) else Fraction(x)


def compute_params(eps, delta, d: int, gamma: float | None = None) -> ColoringParams:
    """``gamma = delta/200 * exp(-10/eps)``, ``d1 = ceil(delta d/4)``, ``s = ceil(eps d/2)``,
    ``d2 = ceil(gamma d)``.  Passing ``gamma`` replaces the default (labelled in the result)."""
    eps, delta = _rational(eps), _rational(delta)
    if not (0 < eps < 1 and 0 < delta < 1):
        raise ValueError("eps and delta must lie in (0, 1)")
    if d < 1:
        raise ValueError("d must be positive")
    default = float(delta) / 200 * math.exp(-10 / float(eps))
    g = default if gamma is None else float(gamma)
    if g <= 0:
        raise ValueError("gamma must be positive")
    return ColoringParams(eps, delta, d, g, ceil(delta * d / 4), ceil(eps * d / 2),
                       math.ceil(g * d), gamma is not None)


@dataclass(frozen=True)
class DegenerateInstance:
    graph: Graph
    order: DegeneracyOrder
    params: ColoringParams

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def A(self) -> tuple[int, ...]:
        return self.order.order[: max(0, self.n - self.params.d1)]

    @property
    def B(self) -> tuple[int, ...]:
        return self.order.order[max(0, self.n - self.params.d1):]

    def forward(self) -> dict[int, int]:
        return self.order.forward_masks(self.graph)


def make_instance(graph: Graph, order, eps, delta, d: int, gamma: float | None = None) -> DegenerateInstance:
    order = tuple(order)
    if sorted(order) != list(range(graph.n)):
        raise ValueError("order must be a permutation of the vertices")
    params = compute_params(eps, delta, d, gamma)
    fwd = DegeneracyOrder(order, 0)
    return DegenerateInstance(graph, DegeneracyOrder(order, fwd.max_forward_degree(graph)), params)


@dataclass(frozen=True)
class InstanceCheck:
    ok: bool
    violations: list[tuple[int, str, str]]  # (vertex, condition, detail)

    def __bool__(self) -> bool:
        return self.ok


def check_instance(inst: DegenerateInstance) -> InstanceCheck:
    p = inst.params
    g = inst.graph
    n = g.n
    fwd = inst.forward()
    early = n - p.delta * p.d / 4  # positions 1..early need the sparser bound
    sparse_deg = (1 - p.eps) * p.d
    edge_cap = (1 - p.delta) * comb(p.d, 2)
    bad = []
    for j, v in enumerate(inst.order.order, start=1):
        size = fwd[v].bit_count()
        if size > p.d:
            bad.append((v, "1", f"|N+| = {size} > d = {p.d}"))
        elif j <= early and size > sparse_deg:
            bad.append((v, "1", f"|N+| = {size} > (1-eps)d = {sparse_deg} at position {j}"))
        inside = edges_within(g.adj, fwd[v])
        if inside > edge_cap:
            bad.append((v, "2", f"e(N+) = {inside} > (1-delta)C(d,2) = {edge_cap}"))
    return InstanceCheck(not bad, bad)


@dataclass(frozen=True)
class VertexStats:
    AT: int
    Del: int
    X: int
    X_prime: int
    forward_size: int
    repeated: int  # colours retained by at least two vertices of N+(v)
    disjunction: bool  # |N+(v)| <= d - d2 - 1 or repeated >= d2 + 1


@dataclass
class ColoringRun:
    seed: int
    assigned: dict[int, int]  # phase-1 draw for every A-vertex
    partial: dict[int, int | None]  # after uncolouring conflicts
    stats: dict[int, VertexStats] = field(default_factory=dict)
    final: ProperColoring | None = None
    failure: tuple[int, str] | None = None

    @property
    def success(self) -> bool:
        return self.final is not None

    @property
    def colors_used(self) -> int | None:
        return None if self.final is None else len(set(self.final.assignment))

    @property
    def min_X(self) -> int | None:
        return min((s.X for s in self.stats.values()), default=None)


def draw_colors(n: int, s: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(key=seed))
    return rng.integers(0, s, size=n)


def random_partial_color(inst: DegenerateInstance, seed: int) -> ColoringRun:
    draws = draw_colors(inst.n, inst.params.s, seed)
    A = inst.A
    pos = inst.order.positions()
    assigned = {v: int(draws[v]) for v in A}
    in_a = 0
    for v in A:
        in_a |= 1 << v
    adj = inst.graph.adj
    drop = set()
    for u in A:
        for w in iter_bits(adj[u] & in_a):
            if u < w and assigned[u] == assigned[w]:
                drop.add(u if pos[u] > pos[w] else w)
    partial = {v: (None if v in drop else assigned[v]) for v in A}
    return ColoringRun(seed, assigned, partial)


def collect_stats(run: ColoringRun, inst: DegenerateInstance) -> dict[int, VertexStats]:
    """Per ``B``-vertex counts over ``N+(v) & A``."""
    adj = inst.graph.adj
    p = inst.params
    fwd = inst.forward()
    in_a = 0
    for v in inst.A:
        in_a |= 1 << v
    out = {}
    for v in inst.B:
        nbrs = fwd[v]
        groups: dict[int, list[int]] = {}
        for u in iter_bits(nbrs & in_a):
            groups.setdefault(run.assigned[u], []).append(u)
        at = dele = x = xp = 0
        for c, members in groups.items():
            mmask = 0
            for u in members:
                mmask |= 1 << u
            if not any(mmask & ~adj[u] & ~(1 << u) for u in members):
                continue  # no non-adjacent pair got colour c
            at += 1
            kept = all(run.partial[u] is not None for u in members)
            if kept:
                x += 1
            else:
                dele += 1
            if len(members) == 2 and kept:
                xp += 1
        retained = Counter(run.partial[u] for u in iter_bits(nbrs & in_a) if run.partial[u] is not None)
        repeated = sum(1 for cnt in retained.values() if cnt >= 2)
        size = nbrs.bit_count()
        disj = size <= p.d - p.d2 - 1 or repeated >= p.d2 + 1
        out[v] = VertexStats(at, dele, x, xp, size, repeated, disj)
    run.stats = out
    return out


def greedy_complete(run: ColoringRun, inst: DegenerateInstance,
                    colors: int | None = None) -> ProperColoring | None:
    """Colour the uncoloured vertices in order with the least colour free among
    already-coloured neighbours; on failure record the blocking vertex in ``run.failure``."""
    budget = inst.params.color_budget if colors is None else colors
    adj = inst.graph.adj
    color: dict[int, int] = {v: c for v, c in run.partial.items() if c is not None}
    for v in inst.order.order:
        if v in color:
            continue
        used = 0
        for u in iter_bits(adj[v]):
            c = color.get(u)
            if c is not None:
                used |= 1 << c
        free = (~used & (used + 1)).bit_length() - 1
        if free >= budget:
            run.failure = (v, f"all {budget} colours appear on coloured neighbours")
            return None
        color[v] = free
    run.final = ProperColoring(tuple(color[v] for v in range(inst.n)), max(color.values(), default=-1) + 1)
    return run.final


def attempt_coloring(inst: DegenerateInstance, seed: int, check: bool = True) -> ColoringRun:
    if check:
        res = check_instance(inst)
        if not res.ok:
            raise InstanceViolation(res.violations)
    run = random_partial_color(inst, seed)
    collect_stats(run, inst)
    greedy_complete(run, inst)
    return run


def analytic_xprime_bound(params: ColoringParams) -> float:
    """``s (delta/5) C(d,2) s^-2 (1 - 1/s)^(3d)``, the lower bound on ``E[X'_v]``."""
    s, d = params.s, params.d
    return s * float(params.delta) / 5 * comb(d, 2) * s ** -2 * (1 - 1 / s) ** (3 * d)


# --- Monte Carlo -----------------------------------------------------------------


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    min_X: int | None
    colors_used: int | None
    success: bool
    x_prime: tuple[int, ...]  # per B-vertex, in B order
    partial_proper: bool
    identity_ok: bool  # X = AT - Del and X >= X' for every B-vertex
    final_ok: bool  # returned colouring proper and within budget (vacuous on failure)
    disjunction_failure: bool  # greedy blocked at a B-vertex satisfying the disjunction


def _partial_is_proper(run: ColoringRun, inst: DegenerateInstance) -> bool:
    for u, w in inst.graph.edges():
        cu, cw = run.partial.get(u), run.partial.get(w)
        if cu is not None and cu == cw:
            return False
    return True


def _uncolouring_exact(run: ColoringRun, inst: DegenerateInstance) -> bool:
    """Uncoloured vertices are exactly the later endpoints of monochromatic A-edges."""
    pos = inst.order.positions()
    expect = set()
    for u, w in inst.graph.edges():
        if u in run.assigned and w in run.assigned and run.assigned[u] == run.assigned[w]:
            expect.add(u if pos[u] > pos[w] else w)
    return expect == {v for v, c in run.partial.items() if c is None}


def run_trial(inst: DegenerateInstance, seed: int) -> TrialRecord:
    run = attempt_coloring(inst, seed, check=False)
    proper = _partial_is_proper(run, inst) and _uncolouring_exact(run, inst)
    ident = all(s.X == s.AT - s.Del and s.X >= s.X_prime for s in run.stats.values())
    final_ok = True
    if run.final is not None:
        final_ok = run.final.is_proper(inst.graph) and run.colors_used <= inst.params.color_budget
    disj_fail = False
    if run.failure is not None:
        v = run.failure[0]
        disj_fail = v in run.stats and run.stats[v].disjunction
    return TrialRecord(seed, run.min_X, run.colors_used, run.success,
                       tuple(run.stats[v].X_prime for v in inst.B), proper, ident, final_ok, disj_fail)


def _trial_chunk(args):
    inst, seeds = args
    return [run_trial(inst, s) for s in seeds]


@dataclass
class MonteCarloSummary:
    params: ColoringParams
    records: list[TrialRecord]

    @property
    def trials(self) -> int:
        return len(self.records)

    @property
    def success_rate(self) -> float:
        return sum(r.success for r in self.records) / max(1, self.trials)

    @property
    def min_x_distribution(self) -> dict:
        return dict(sorted(Counter(r.min_X for r in self.records).items(), key=lambda kv: (kv[0] is None, kv[0] or 0)))

    @property
    def any_within_gamma(self) -> bool:
        limit = (1 - self.params.gamma) * self.params.d
        return any(r.success and r.colors_used <= limit for r in self.records)

    def x_prime_mean_se(self) -> list[tuple[float, float]]:
        if not self.records:
            return []
        arr = np.array([r.x_prime for r in self.records], dtype=float)
        if arr.ndim < 2 or arr.shape[1] == 0:
            return []
        n = arr.shape[0]
        se = arr.std(axis=0, ddof=1) / math.sqrt(n) if n > 1 else np.zeros(arr.shape[1])
        return list(zip(arr.mean(axis=0).tolist(), se.tolist()))

    def to_csv(self) -> str:
        lines = ["seed,min_X_v,colors_used,success"]
        for r in self.records:
            lines.append(f"{r.seed},{'' if r.min_X is None else r.min_X},"
                         f"{'' if r.colors_used is None else r.colors_used},{int(r.success)}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        bound = analytic_xprime_bound(self.params)
        return {
            "trials": self.trials,
            "success_rate": self.success_rate,
            "min_X_distribution": {("none" if k is None else str(k)): v for k, v in self.min_x_distribution.items()},
            "any_within_(1-gamma)d": self.any_within_gamma,
            "analytic_Xprime_bound": bound,
            "Xprime_mean_se": [[round(m, 12), round(s, 12)] for m, s in self.x_prime_mean_se()],
            "partial_always_proper": all(r.partial_proper for r in self.records),
            "identities_hold": all(r.identity_ok for r in self.records),
            "final_colorings_valid": all(r.final_ok for r in self.records),
            "disjunction_failures": sum(r.disjunction_failure for r in self.records),
            "params": {"eps": str(self.params.eps), "delta": str(self.params.delta), "d": self.params.d,
                       "gamma": self.params.gamma, "gamma_override": self.params.gamma_override,
                       "d1": self.params.d1, "s": self.params.s, "d2": self.params.d2},
        }


def monte_carlo(inst: DegenerateInstance, trials: int, seed: int = 0, jobs: int = 1) -> MonteCarloSummary:
    """Trials use seeds ``seed, seed+1, ...``; records come back in seed order for any ``jobs``."""
    res = check_instance(inst)
    if not res.ok:
        raise InstanceViolation(res.violations)
    seeds = list(range(seed, seed + trials))
    if jobs <= 1 or trials < 2:
        records = [run_trial(inst, s) for s in seeds]
    else:
        size = max(1, math.ceil(trials / (jobs * 4)))
        chunks = [(inst, seeds[i:i + size]) for i in range(0, trials, size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = [rec for part in pool.map(_trial_chunk, chunks) for rec in part]
    return MonteCarloSummary(inst.params, records)


# --- instance generators and fixtures --------------------------------------------


def clique_tail_instance(d: int = 40, eps="1/2", delta="1/2", cliques: int = 4, clique_size: int = 9,
                         tail: int | None = None, gamma: float | None = None) -> DegenerateInstance:
    """Disjoint cliques followed by a clique tail joined to every earlier vertex.

    The tail has ``d1`` vertices unless given, so the tail is exactly ``B``.
    """
    params = compute_params(eps, delta, d, gamma)
    tail = params.d1 if tail is None else tail
    edges = []
    base = 0
    for _ in range(cliques):
        edges += [(base + a, base + b) for a in range(clique_size) for b in range(a + 1, clique_size)]
        base += clique_size
    na = base
    for j in range(tail):
        v = na + j
        edges += [(u, v) for u in range(v)]
    g = Graph(na + tail, edges)
    return make_instance(g, range(g.n), eps, delta, d, gamma)


def overlapping_clique_instance(d: int, eps, delta, cliques: int, clique_size: int, shift: int,
                                gamma: float | None = None) -> DegenerateInstance:
    """Cliques on windows ``[k*shift, k*shift + clique_size)`` of a line, plus a dense tail like
    :func:`clique_tail_instance`.  Certify with :func:`check_instance` before use."""
    params = compute_params(eps, delta, d, gamma)
    edges = set()
    na = (cliques - 1) * shift + clique_size
    for k in range(cliques):
        vs = range(k * shift, k * shift + clique_size)
        edges.update((a, b) for a in vs for b in vs if a < b)
    for j in range(params.d1):
        v = na + j
        edges.update((u, v) for u in range(max(0, v - d), v))
    g = Graph(na + params.d1, sorted(edges))
    return make_instance(g, range(g.n), eps, delta, d, gamma)


def save_instance(inst: DegenerateInstance, path: str | Path) -> None:
    path = Path(path)
    path.write_bytes(emit_graph6(inst.graph) + b"\n")
    p = inst.params
    side = {"eps": str(p.eps), "delta": str(p.delta), "d": p.d, "order": list(inst.order.order)}
    if p.gamma_override:
        side["gamma"] = p.gamma
    path.with_suffix(".json").write_text(json.dumps(side))


def load_instance(path: str | Path) -> DegenerateInstance:
    path = Path(path)
    g = parse_graph6(path.read_bytes().strip())
    side = json.loads(path.with_suffix(".json").read_text())
    return make_instance(g, side["order"], side["eps"], side["delta"], int(side["d"]), side.get("gamma"))
