"""Critical-subgraph peeling, per-vertex excess accounting and Gallai joins.

A peel of an ``r``-chromatic graph alternates two moves: shrink the current
graph ``G_i`` to an ``(r-i)``-critical induced subgraph ``G_i'``, then delete a
maximum independent set ``I_i`` of ``G_i'`` to get ``G_{i+1}``.  All vertex sets
are bitmasks in the host graph's labels, so every quantity below is read off the
host adjacency without relabelling.

All inequality arithmetic is exact (``fractions.Fraction``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb
from typing import Iterable

from .graph import (Graph, VertexSet, complement, components, edge_triangle_support, edges_within,
                    induced_subgraph, is_independent, iter_bits, triangle_count)
from .solvers import (BoundCheck, chromatic_mask, critical_mask, is_critical_mask, max_clique_mask,
                      max_independent_mask)


def _members(mask: int) -> VertexSet:
    return frozenset(iter_bits(mask))


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class PeelStep:
    i: int
    g: int  # G_i
    g_prime: int  # G_i'
    indep: int  # I_i
    case: int | None = None  # modified-weight peel only: 1 if I_i misses every large clique
    incident_edges: int | None = None  # m_i, edges of G_i' meeting I_i

    @property
    def k(self) -> int:
        return self.indep.bit_count()

    @property
    def G(self) -> VertexSet:
        return _members(self.g)

    @property
    def G_prime(self) -> VertexSet:
        return _members(self.g_prime)

    @property
    def I(self) -> VertexSet:
        return _members(self.indep)


@dataclass(frozen=True)
class PeelingTrace:
    host: Graph
    r: int
    steps: tuple[PeelStep, ...]
    stop_reason: str | None = None  # modified-weight peel: "i", "ii" or "iii"
    stop_index: int | None = None
    final_g: int = 0  # graph the process stopped at (G_j, G_j')
    final_g_prime: int = 0

    @property
    def ks(self) -> list[int]:
        return [s.k for s in self.steps]

    def step_graph(self, i: int, prime: bool = True) -> Graph:
        s = self.steps[i]
        return induced_subgraph(self.host, s.g_prime if prime else s.g)


def turan_peel(g: Graph) -> PeelingTrace:
    if g.n < 1:
        raise ValueError("needs at least one vertex")
    adj = g.adj
    r, _ = chromatic_mask(adj, g.vertex_mask)
    cur = g.vertex_mask
    steps = []
    for i in range(r):
        gp = critical_mask(adj, cur, r - i)
        indep = max_independent_mask(adj, gp)
        steps.append(PeelStep(i, cur, gp, indep))
        cur = gp & ~indep
    return PeelingTrace(g, r, tuple(steps))


def verify_trace(trace: PeelingTrace) -> list[str]:
    """Recompute every trace invariant from scratch; return the violations found."""
    adj = trace.host.adj
    r = trace.r
    problems = []
    if len(trace.steps) and trace.steps[0].g & ~trace.host.vertex_mask:
        problems.append("G_0 not inside host")
    prev_prime = None
    prev_k = None
    for s in trace.steps:
        target = r - s.i
        tag = f"step {s.i}"
        if prev_prime is not None and s.g != prev_prime:
            problems.append(f"{tag}: G_i is not G_(i-1)' minus I_(i-1)")
        if s.g_prime & ~s.g:
            problems.append(f"{tag}: G_i' not inside G_i")
        if s.indep & ~s.g_prime:
            problems.append(f"{tag}: I_i not inside G_i'")
        if chromatic_mask(adj, s.g)[0] != target:
            problems.append(f"{tag}: chi(G_i) != {target}")
        if not is_critical_mask(adj, s.g_prime, target):
            problems.append(f"{tag}: G_i' is not {target}-critical")
        if not is_independent(adj, s.indep):
            problems.append(f"{tag}: I_i not independent")
        if trace.stop_reason is None and s.k != max_independent_mask(adj, s.g_prime).bit_count():
            problems.append(f"{tag}: |I_i| != alpha(G_i')")
        if trace.stop_reason is None and prev_k is not None and s.k > prev_k:
            problems.append(f"{tag}: k_i increased")
        prev_prime = s.g_prime & ~s.indep
        prev_k = s.k
    if trace.stop_reason is None and trace.steps and prev_prime:
        problems.append("final graph not empty")
    return problems


def check_triangle_edge_bound(g: Graph) -> BoundCheck:
    """``t(G) + e(G)/2`` against ``C(r,3) + C(r,2)/2`` with ``r = chi(G)``."""
    r, _ = chromatic_mask(g.adj, g.vertex_mask)
    return _triangle_edge_bound(triangle_count(g), g.num_edges, r)


def _triangle_edge_bound(t: int, e: int, r: int) -> BoundCheck:
    lhs = t + Fraction(e, 2)
    rhs = comb(r, 3) + Fraction(comb(r, 2), 2)
    return BoundCheck(lhs, rhs, lhs >= rhs)


# --- excess ---------------------------------------------------------------------


@dataclass(frozen=True)
class VertexExcess:
    v: int
    step: int
    kind: str  # "I": v in I_i, "D": v in G_i minus G_i'
    excess: Fraction
    bound: Fraction | None  # Turan-derived lower bound; None where it does not apply


@dataclass(frozen=True)
class ExcessReport:
    r: int
    vertices: dict[int, VertexExcess]
    incident_edges: tuple[int, ...]  # m_i per step

    @property
    def total(self) -> Fraction:
        return sum((x.excess for x in self.vertices.values()), Fraction(0))

    def all_nonnegative(self) -> bool:
        return all(x.excess >= 0 for x in self.vertices.values())

    def bounds_respected(self) -> bool:
        return all(x.bound is None or x.excess >= x.bound for x in self.vertices.values())


class TraceError(ValueError):
    pass


def excess_report(trace: PeelingTrace) -> ExcessReport:
    adj = trace.host.adj
    r = trace.r
    out: dict[int, VertexExcess] = {}
    m = []
    prev_k = None
    for s in trace.steps:
        i, gp, gi, k = s.i, s.g_prime, s.g, s.k
        base = Fraction((r - i - 1) ** 2, 2 * k) if k else Fraction(0)
        inc = 0
        for v in iter_bits(s.indep):
            nb = adj[v] & gp
            d = nb.bit_count()
            inc += d
            ex = edges_within(adj, nb) + Fraction(d, 2) - base
            bound = Fraction(d * d - (r - i - 1) ** 2, 2 * k)
            _put(out, VertexExcess(v, i, "I", ex, bound))
        m.append(inc)
        for v in iter_bits(gi & ~gp):
            nb = adj[v] & gi
            d = nb.bit_count()
            ex = Fraction(edges_within(adj, nb), 3) + Fraction(d, 4)
            bound = Fraction(d * d, 6 * prev_k) if prev_k else None
            _put(out, VertexExcess(v, i, "D", ex, bound))
        prev_k = k
    missing = set(range(trace.host.n)) - set(out)
    if missing and trace.stop_reason is None:
        raise TraceError(f"vertices {sorted(missing)} belong to no step of the trace")
    return ExcessReport(r, out, tuple(m))


def _put(out: dict[int, VertexExcess], item: VertexExcess) -> None:
    if item.v in out:
        raise TraceError(f"vertex {item.v} appears in two step classes")
    out[item.v] = item


@dataclass(frozen=True)
class ExcessCheck:
    edges_lhs: Fraction  # e(G)
    edges_rhs: Fraction
    triangles_lhs: Fraction  # t(G)
    triangles_rhs: Fraction
    chain_lhs: Fraction  # t + e/2 - sum (r-i-1)^2 / 2
    chain_rhs: Fraction  # sum of excess

    @property
    def holds(self) -> bool:
        return (self.edges_lhs >= self.edges_rhs and self.triangles_lhs >= self.triangles_rhs
                and self.chain_lhs >= self.chain_rhs)

    @property
    def tight(self) -> bool:
        return (self.edges_lhs == self.edges_rhs and self.triangles_lhs == self.triangles_rhs
                and self.chain_lhs == self.chain_rhs)

    def __bool__(self) -> bool:
        return self.holds


def excess_identity_check(g: Graph, trace: PeelingTrace, report: ExcessReport) -> ExcessCheck:
    adj = g.adj
    e_rhs = Fraction(0)
    t_rhs = Fraction(0)
    for s in trace.steps:
        for v in iter_bits(s.indep):
            nb = adj[v] & s.g_prime
            e_rhs += nb.bit_count()
            t_rhs += edges_within(adj, nb)
        for v in iter_bits(s.g & ~s.g_prime):
            nb = adj[v] & s.g
            e_rhs += Fraction(nb.bit_count(), 2)
            t_rhs += Fraction(edges_within(adj, nb), 3)
    e = g.num_edges
    t = triangle_count(g)
    r = trace.r
    chain = t + Fraction(e, 2) - sum(Fraction((r - i - 1) ** 2, 2) for i in range(len(trace.steps)))
    return ExcessCheck(Fraction(e), e_rhs, Fraction(t), t_rhs, chain, report.total)


# --- Gallai ------------------------------------------------------------------------


@dataclass(frozen=True)
class SmallGraphCheck:
    t: int
    bound: int
    holds: bool
    applicable: bool


def check_small_graph_triangles(g: Graph) -> SmallGraphCheck:
    """``t(G) >= C(r,3)`` for ``r = chi(G)``, applicable only when ``|G| <= 2r - 2``."""
    r, _ = chromatic_mask(g.adj, g.vertex_mask)
    return _small_graph_triangles(g.n, triangle_count(g), r)


def _small_graph_triangles(n: int, t: int, r: int) -> SmallGraphCheck:
    bound = comb(r, 3)
    if n > 2 * r - 2:
        return SmallGraphCheck(t, bound, True, False)
    return SmallGraphCheck(t, bound, t >= bound, True)


def gallai_join_split(g: Graph) -> tuple[int, int] | None:
    """Vertex masks ``(A, B)`` with ``G = A join B``, or ``None`` if the complement is connected.

    ``A`` is the smallest complement component (least vertex on ties).
    """
    comp = complement(g)
    parts = components(comp.adj, comp.vertex_mask)
    if len(parts) < 2:
        return None
    a = min(parts, key=lambda m: (m.bit_count(), m & -m))
    return a, g.vertex_mask & ~a


def gallai_join_decompose(g: Graph) -> tuple[Graph, Graph] | None:
    split = gallai_join_split(g)
    if split is None:
        return None
    a, b = split
    return induced_subgraph(g, a), induced_subgraph(g, b)


@dataclass(frozen=True)
class GallaiCheck:
    applicable: bool  # G is r-critical with |G| <= 2r - 2
    decomposed: bool
    factors_critical: bool

    @property
    def holds(self) -> bool:
        return not self.applicable or (self.decomposed and self.factors_critical)


def gallai_check(g: Graph, r: int | None = None) -> GallaiCheck:
    adj = g.adj
    full = g.vertex_mask
    if r is None:
        r, _ = chromatic_mask(adj, full)
    if g.n > 2 * r - 2 or not is_critical_mask(adj, full, r):
        return GallaiCheck(False, False, False)
    split = gallai_join_split(g)
    if split is None:
        return GallaiCheck(True, False, False)
    ok = True
    for part in split:
        ra, _ = chromatic_mask(adj, part)
        ok &= is_critical_mask(adj, part, ra)
    return GallaiCheck(True, True, ok)


# --- modified-weight peel --------------------------------------------------------


@dataclass(frozen=True)
class ModifiedWeightConfig:
    eps: Fraction
    C: Fraction

    def __post_init__(self):
        object.__setattr__(self, "eps", Fraction(self.eps))
        object.__setattr__(self, "C", Fraction(self.C))
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if self.C <= 0:
            raise ValueError("C must be positive")

    @property
    def boost(self) -> Fraction:
        return 1 + self.eps ** 2 / 10


def _stop_rule(cfg: ModifiedWeightConfig, r: int, i: int, size: int, omega: int) -> str | None:
    eps, rem = cfg.eps, r - i
    # i > (1 - eps^(2/3) / 4) r  <=>  64 (r - i)^3 < r^3 eps^2
    if 64 * rem ** 3 < r ** 3 * eps ** 2:
        return "i"
    if size < cfg.C * rem:
        return "ii"
    if omega < eps * rem:
        return "iii"
    return None


def _lex_key(mask: int) -> tuple[int, ...]:
    return tuple(iter_bits(mask))


def max_modified_weight_set(adj, gp: int, threshold: int, boost: Fraction) -> tuple[int, int]:
    """Independent set of ``G_i'`` with maximal modified weight, and the "large-clique" vertex mask.

    A set earns the ``boost`` factor when it meets a clique of size at least
    ``threshold``, i.e. contains a vertex whose closed neighbourhood holds such a
    clique.  Ties: more vertices, then lexicographically smallest.
    """
    big = 0
    for u in iter_bits(gp):
        if max_clique_mask(adj, adj[u] & gp).bit_count() + 1 >= threshold:
            big |= 1 << u
    cands = []
    avoid = max_independent_mask(adj, gp & ~big)
    cands.append((Fraction(avoid.bit_count()), avoid))
    best_hit = None
    for b in iter_bits(big):
        s = (1 << b) | max_independent_mask(adj, gp & ~adj[b] & ~(1 << b))
        if best_hit is None or (s.bit_count(), _neg_lex(s)) > (best_hit.bit_count(), _neg_lex(best_hit)):
            best_hit = s
    if best_hit is not None:
        cands.append((boost * best_hit.bit_count(), best_hit))
    weight, chosen = max(cands, key=lambda c: (c[0], c[1].bit_count(), _neg_lex(c[1])))
    return chosen, big


def _neg_lex(mask: int) -> tuple[int, ...]:
    return tuple(-v for v in iter_bits(mask))


def modified_weight_peel(g: Graph, cfg: ModifiedWeightConfig) -> PeelingTrace:
    if g.n < 1:
        raise ValueError("needs at least one vertex")
    adj = g.adj
    r, _ = chromatic_mask(adj, g.vertex_mask)
    cur = g.vertex_mask
    steps = []
    i = 0
    while True:
        gp = critical_mask(adj, cur, r - i) if r - i > 0 else 0
        omega = max_clique_mask(adj, gp).bit_count()
        reason = _stop_rule(cfg, r, i, gp.bit_count(), omega)
        if reason is not None:
            return PeelingTrace(g, r, tuple(steps), reason, i, cur, gp)
        threshold = ceil(cfg.eps * (r - i))
        indep, big = max_modified_weight_set(adj, gp, threshold, cfg.boost)
        m_i = sum((adj[v] & gp).bit_count() for v in iter_bits(indep))
        steps.append(PeelStep(i, cur, gp, indep, 1 if not indep & big else 2, m_i))
        cur = gp & ~indep
        i += 1


# --- scans -----------------------------------------------------------------------


def min_triangle_support_scan(corpus: Iterable[Graph], r: int) -> int:
    """Least ``k`` such that no corpus graph with ``chi >= r`` and every edge in ``>= k``
    triangles has fewer than ``C(r,3)`` triangles."""
    need = 0
    seen = False
    target = comb(r, 3)
    for g in corpus:
        seen = True
        if triangle_count(g) >= target:
            continue
        chi, _ = chromatic_mask(g.adj, g.vertex_mask)
        if chi < r:
            continue
        low = edge_triangle_support(g).minimum
        need = max(need, (low if low is not None else 0) + 1)
    if not seen:
        raise ValueError("empty corpus")
    return need


def check_support_edge_ratio(g: Graph, t: int) -> bool | None:
    """``(t-2) e(G) <= 3 t(G)`` whenever every edge lies in at least ``t-2`` triangles."""
    sup = edge_triangle_support(g)
    if sup.minimum is not None and sup.minimum < t - 2:
        return None
    return (t - 2) * g.num_edges <= 3 * triangle_count(g)


# --- export ----------------------------------------------------------------------


def trace_to_dict(trace: PeelingTrace, report: ExcessReport | None = None) -> dict:
    steps = []
    for s in trace.steps:
        item = {"i": s.i, "n_i": s.g.bit_count(), "n_i_prime": s.g_prime.bit_count(), "k_i": s.k,
                "I_i": sorted(s.I)}
        if s.case is not None:
            item["case"] = s.case
            item["m_i"] = s.incident_edges
        if report is not None:
            item["excess"] = [
                {"v": x.v, "kind": x.kind, "ex": _frac(x.excess),
                 "bound": None if x.bound is None else _frac(x.bound)}
                for x in sorted(report.vertices.values(), key=lambda x: x.v) if x.step == s.i]
        steps.append(item)
    out = {"graph6": trace.host.graph6, "r": trace.r, "steps": steps}
    if trace.stop_reason is not None:
        out["stop_reason"] = trace.stop_reason
        out["stop_index"] = trace.stop_index
        out["stopped_at_n"] = trace.final_g_prime.bit_count()
    if report is not None:
        out["total_excess"] = _frac(report.total)
    return out


def trace_to_json(trace: PeelingTrace, report: ExcessReport | None = None, **kw) -> str:
    return json.dumps(trace_to_dict(trace, report), **kw)

