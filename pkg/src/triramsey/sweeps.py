"""Corpus-wide audits.

Each graph6 line is checked independently, so work is cut into chunks of lines
and farmed out to worker processes; results come back in corpus order and the
summary does not depend on the number of workers.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Iterable, Sequence

from . import bounds
from .arrowing import arrows, pentagon_coloring, lift_coloring, has_monochromatic_clique
from .graph import parse_graph6, triangle_count
from .peeling import (_small_graph_triangles, _triangle_edge_bound, excess_identity_check, excess_report, gallai_check,
                      turan_peel, verify_trace)
from .solvers import ProperColoring, chromatic_mask

DEFAULT_BUDGET = 10 ** 7
TRIANGLE_CAP = 19  # K_6 has 20 triangles


def default_jobs() -> int:
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1)


@dataclass(frozen=True)
class GraphAudit:
    graph6: str
    n: int
    e: int
    t: int
    chi: int
    triangle_bound: bool
    small_applicable: bool
    small_graph: bool
    gallai_applicable: bool
    gallai: bool
    trace_ok: bool
    excess_nonneg: bool
    excess_bounds: bool
    identities: bool
    tight: bool
    arrows: bool | None  # None: not searched or undecided
    searched: bool
    decided: bool
    lift_ok: bool | None  # pentagon lift certifies non-arrowing (chi <= 5 only)

    def ok(self) -> bool:
        return (self.triangle_bound and self.small_graph and self.gallai and self.trace_ok and self.excess_nonneg
                and self.excess_bounds and self.identities and self.lift_ok is not False)


def audit_graph(line: bytes | str, budget: int = DEFAULT_BUDGET, search_arrowing: bool = True,
                check_trace: bool = True) -> GraphAudit:
    g = parse_graph6(line)
    adj, full = g.adj, g.vertex_mask
    e, t = g.num_edges, triangle_count(g)
    if g.n == 0:
        return GraphAudit(g.graph6, 0, 0, 0, 0, True, False, True, False, True, True, True, True,
                          True, True, None, False, False, None)
    chi, col = chromatic_mask(adj, full)
    th = _triangle_edge_bound(t, e, chi).holds
    cor = _small_graph_triangles(g.n, t, chi)
    gal = gallai_check(g, chi)
    trace = turan_peel(g)
    trace_ok = not verify_trace(trace) if check_trace else True
    rep = excess_report(trace)
    ident = excess_identity_check(g, trace, rep)
    arrow = None
    searched = decided = False
    lift_ok = None
    if chi <= 5:
        c = ProperColoring(tuple(col[v] for v in range(g.n)), 5)
        lift_ok = not has_monochromatic_clique(g, lift_coloring(g, c, pentagon_coloring()), 3)
    if search_arrowing and (t <= TRIANGLE_CAP or chi >= 6):
        res = arrows(g, 3, budget)
        searched, decided, arrow = True, res.decided, res.arrows
    elif lift_ok:
        decided, arrow = True, False
    return GraphAudit(g.graph6, g.n, e, t, chi, th, cor.applicable, cor.holds, gal.applicable, gal.holds,
                      trace_ok, rep.all_nonnegative(), rep.bounds_respected(), ident.holds, ident.tight,
                      arrow, searched, decided, lift_ok)


def _audit_chunk(args):
    lines, budget, search, check = args
    return [audit_graph(ln, budget, search, check) for ln in lines]


def _chunked(items: Sequence, size: int):
    for i in range(0, len(items), size):
        yield items[i:i + size]


def parallel_map(fn, tasks: list, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def audit_lines(lines: Sequence[bytes], jobs: int = 1, budget: int = DEFAULT_BUDGET,
                search_arrowing: bool = True, check_trace: bool = True, chunk: int = 2000) -> list[GraphAudit]:
    tasks = [(part, budget, search_arrowing, check_trace) for part in _chunked(list(lines), chunk)]
    return [a for part in parallel_map(_audit_chunk, tasks, jobs) for a in part]


@dataclass
class AuditSummary:
    graphs: int = 0
    by_n: Counter = field(default_factory=Counter)
    triangle_bound_violations: list[str] = field(default_factory=list)
    small_applicable: int = 0
    small_violations: list[str] = field(default_factory=list)
    gallai_applicable: int = 0
    gallai_violations: list[str] = field(default_factory=list)
    trace_violations: list[str] = field(default_factory=list)
    excess_violations: list[str] = field(default_factory=list)
    identity_violations: list[str] = field(default_factory=list)
    lift_violations: list[str] = field(default_factory=list)
    arrowing_searched: int = 0
    arrowing_undecided: list[str] = field(default_factory=list)
    low_triangle_arrowing: list[str] = field(default_factory=list)  # arrows K_3 with <= 19 triangles
    arrowing_graphs: list[str] = field(default_factory=list)
    copy_count_violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.triangle_bound_violations or self.small_violations or self.gallai_violations
                    or self.trace_violations or self.excess_violations or self.identity_violations
                    or self.lift_violations or self.low_triangle_arrowing or self.copy_count_violations)

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = dict(sorted(v.items())) if isinstance(v, Counter) else v
        out["ok"] = self.ok
        return out


def summarize(audits: Iterable[GraphAudit]) -> AuditSummary:
    from .named import complete, path, star

    k6 = complete(6)
    patterns = [bounds.ForestPattern.of(h) for h in (complete(2), path(3), star(3))]
    ref = [bounds.count_forest_copies(p, k6)[1] for p in patterns]
    s = AuditSummary()
    for a in audits:
        s.graphs += 1
        s.by_n[a.n] += 1
        if not a.triangle_bound:
            s.triangle_bound_violations.append(a.graph6)
        s.small_applicable += a.small_applicable
        if not a.small_graph:
            s.small_violations.append(a.graph6)
        s.gallai_applicable += a.gallai_applicable
        if not a.gallai:
            s.gallai_violations.append(a.graph6)
        if not a.trace_ok:
            s.trace_violations.append(a.graph6)
        if not (a.excess_nonneg and a.excess_bounds):
            s.excess_violations.append(a.graph6)
        if not a.identities:
            s.identity_violations.append(a.graph6)
        if a.lift_ok is False:
            s.lift_violations.append(a.graph6)
        if a.searched:
            s.arrowing_searched += 1
            if not a.decided:
                s.arrowing_undecided.append(a.graph6)
        if a.arrows:
            s.arrowing_graphs.append(a.graph6)
            if a.t <= TRIANGLE_CAP:
                s.low_triangle_arrowing.append(a.graph6)
            g = parse_graph6(a.graph6)
            for p, r in zip(patterns, ref):
                if bounds.count_forest_copies(p, g)[1] < r:
                    s.copy_count_violations.append(a.graph6)
                    break
    return s


def audit_csv(audits: Iterable[GraphAudit]) -> str:
    names = [f.name for f in fields(GraphAudit)]
    rows = [",".join(names)]
    for a in audits:
        vals = []
        for nm in names:
            v = getattr(a, nm)
            vals.append("" if v is None else str(int(v)) if isinstance(v, bool) else str(v))
        rows.append(",".join(vals))
    return "\n".join(rows) + "\n"


# --- forest sweep ----------------------------------------------------------------


def _forest_chunk(args):
    lines, max_f = args
    forests = bounds.small_forests(max_f)
    bad = []
    checked = 0
    for ln in lines:
        g = parse_graph6(ln)
        if g.n == 0 or g.min_degree() < 1:
            continue
        for f in forests:
            res = bounds.check_forest_copies(f, g)
            checked += 1
            if not (res.holds and res.reference_matches_bound):
                bad.append((f.graph.graph6, g.graph6))
    return checked, bad


def forest_sweep(lines: Sequence[bytes], max_forest: int = 5, jobs: int = 1,
                 chunk: int = 2000) -> tuple[int, list[tuple[str, str]]]:
    """(pairs checked, violating (forest, graph) pairs) over graphs of minimum degree >= 1."""
    bounds.small_forests(max_forest)  # build once before forking
    tasks = [(part, max_forest) for part in _chunked(list(lines), chunk)]
    checked, bad = 0, []
    for c, b in parallel_map(_forest_chunk, tasks, jobs):
        checked += c
        bad += b
    return checked, bad
