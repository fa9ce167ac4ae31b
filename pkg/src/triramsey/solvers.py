"""Exact clique, independence and colouring solvers.

The public functions take a :class:`Graph`; the ``*_mask`` variants work on an
adjacency tuple restricted to a vertex bitmask and are what the peeling code
calls in its inner loops (no relabelling, no allocation of new graphs).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .graph import Graph, VertexSet, induced_subgraph, iter_bits


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class ProperColoring:
    assignment: tuple[int, ...]  # vertex -> colour in 0..k-1
    k: int

    def classes(self) -> list[VertexSet]:
        out = [set() for _ in range(self.k)]
        for v, c in enumerate(self.assignment):
            out[c].add(v)
        return [frozenset(s) for s in out]

    def is_proper(self, g: Graph) -> bool:
        if len(self.assignment) != g.n:
            return False
        if any(not 0 <= c < self.k for c in self.assignment):
            return False
        return all(self.assignment[u] != self.assignment[v] for u, v in g.edges())


@dataclass(frozen=True)
class CriticalWitness:
    subgraph: VertexSet
    r: int

    def graph(self, host: Graph) -> Graph:
        return induced_subgraph(host, self.subgraph)


# --- cliques ------------------------------------------------------------------


def _greedy_partition_bound(adj: Sequence[int], cand: int) -> int:
    """Number of colour classes of a sequential greedy colouring of ``cand``."""
    k = 0
    rest = cand
    while rest:
        k += 1
        avail = rest
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            rest ^= low
            avail &= ~adj[v] & ~low
    return k


def max_clique_mask(adj: Sequence[int], mask: int) -> int:
    """Lexicographically smallest maximum clique inside ``mask``.

    Depth-first over increasing vertex sequences, so cliques are met in
    lexicographic order and only strict improvements replace the incumbent.
    """
    best = 0
    best_size = 0

    def expand(clique: int, size: int, cand: int) -> None:
        nonlocal best, best_size
        if not cand:
            if size > best_size:
                best, best_size = clique, size
            return
        if size + cand.bit_count() <= best_size:
            return
        if size + _greedy_partition_bound(adj, cand) <= best_size:
            return
        rest = cand
        while rest:
            if size + rest.bit_count() <= best_size:
                return
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            expand(clique | low, size + 1, adj[v] & rest)

    expand(0, 0, mask)
    return best


def complement_rows(adj: Sequence[int], mask: int) -> list[int]:
    return [(mask & ~row & ~(1 << v)) if mask >> v & 1 else 0 for v, row in enumerate(adj)]


def max_independent_mask(adj: Sequence[int], mask: int) -> int:
    return max_clique_mask(complement_rows(adj, mask), mask)


def max_clique(g: Graph) -> tuple[VertexSet, int]:
    m = max_clique_mask(g.adj, g.vertex_mask)
    return frozenset(iter_bits(m)), m.bit_count()


def clique_number(g: Graph) -> int:
    return max_clique_mask(g.adj, g.vertex_mask).bit_count()


def max_independent_set(g: Graph) -> tuple[VertexSet, int]:
    m = max_independent_mask(g.adj, g.vertex_mask)
    return frozenset(iter_bits(m)), m.bit_count()


def independence_number(g: Graph) -> int:
    return max_independent_mask(g.adj, g.vertex_mask).bit_count()


# --- colouring ----------------------------------------------------------------


def _dsatur_pick(adj, forb, uncolored):
    best = -1
    best_sat = best_deg = -1
    for v in iter_bits(uncolored):
        sat = forb[v].bit_count()
        if sat < best_sat:
            continue
        deg = (adj[v] & uncolored).bit_count()
        if sat > best_sat or deg > best_deg:
            best, best_sat, best_deg = v, sat, deg
    return best


def greedy_coloring_mask(adj: Sequence[int], mask: int) -> dict[int, int]:
    """DSATUR greedy colouring; an upper bound for the chromatic number."""
    forb = [0] * len(adj)
    color: dict[int, int] = {}
    uncolored = mask
    while uncolored:
        v = _dsatur_pick(adj, forb, uncolored)
        c = (~forb[v] & (forb[v] + 1)).bit_length() - 1
        color[v] = c
        uncolored &= ~(1 << v)
        for u in iter_bits(adj[v] & uncolored):
            forb[u] |= 1 << c
    return color


def k_coloring_mask(adj: Sequence[int], mask: int, k: int) -> dict[int, int] | None:
    """Complete DSATUR backtracking: a proper ``k``-colouring of ``mask`` or ``None``."""
    if not mask:
        return {}
    if k <= 0:
        return None
    forb = [0] * len(adj)
    color: dict[int, int] = {}
    full = (1 << k) - 1
    state = [mask]

    def rec(used: int) -> bool:
        uncolored = state[0]
        if not uncolored:
            return True
        v = _dsatur_pick(adj, forb, uncolored)
        allowed = ~forb[v] & ((1 << min(k, used + 1)) - 1)
        nbrs = adj[v] & uncolored & ~(1 << v)
        for c in iter_bits(allowed):
            bit = 1 << c
            changed = []
            dead = False
            for u in iter_bits(nbrs):
                if not forb[u] & bit:
                    forb[u] |= bit
                    changed.append(u)
                    if forb[u] & full == full:
                        dead = True
            if not dead:
                color[v] = c
                state[0] = uncolored & ~(1 << v)
                if rec(max(used, c + 1)):
                    return True
                state[0] = uncolored
                del color[v]
            for u in changed:
                forb[u] &= ~bit
        return False

    return color if rec(0) else None


def is_colorable_mask(adj: Sequence[int], mask: int, k: int) -> bool:
    if mask.bit_count() <= k:
        return True
    return k_coloring_mask(adj, mask, k) is not None


def chromatic_mask(adj: Sequence[int], mask: int) -> tuple[int, dict[int, int]]:
    if not mask:
        return 0, {}
    upper_col = greedy_coloring_mask(adj, mask)
    ub = max(upper_col.values()) + 1
    lb = max_clique_mask(adj, mask).bit_count()
    for k in range(lb, ub):
        col = k_coloring_mask(adj, mask, k)
        if col is not None:
            return k, col
    return ub, upper_col


def _as_coloring(g: Graph, col: dict[int, int], k: int) -> ProperColoring:
    return ProperColoring(tuple(col[v] for v in range(g.n)), k)


def chromatic_number(g: Graph) -> tuple[int, ProperColoring]:
    k, col = chromatic_mask(g.adj, g.vertex_mask)
    return k, _as_coloring(g, col, k)


def is_k_colorable(g: Graph, k: int) -> ProperColoring | None:
    if k < 0:
        raise ValueError("k must be non-negative")
    col = k_coloring_mask(g.adj, g.vertex_mask, k)
    return None if col is None else _as_coloring(g, col, k)


# --- criticality --------------------------------------------------------------


def critical_mask(adj: Sequence[int], mask: int, r: int) -> int:
    """Shrink ``mask`` to an ``r``-critical induced subgraph.

    Vertices are tried in increasing order; ``v`` is dropped when the rest still
    needs ``r`` colours.  One pass suffices: if dropping ``v`` once made the graph
    ``(r-1)``-colourable, it does so for every smaller vertex set as well.
    """
    if r <= 0:
        return 0
    if is_colorable_mask(adj, mask, r - 1):
        raise PreconditionError(f"chromatic number below {r}")
    cur = mask
    for v in iter_bits(mask):
        trial = cur & ~(1 << v)
        if not is_colorable_mask(adj, trial, r - 1):
            cur = trial
    return cur


def critical_subgraph(g: Graph, r: int) -> CriticalWitness:
    return CriticalWitness(frozenset(iter_bits(critical_mask(g.adj, g.vertex_mask, r))), r)


def is_critical_mask(adj: Sequence[int], mask: int, r: int) -> bool:
    """``chi = r`` on ``mask`` and every single-vertex deletion is ``(r-1)``-colourable."""
    if r <= 0:
        return mask == 0
    if is_colorable_mask(adj, mask, r - 1) or not is_colorable_mask(adj, mask, r):
        return False
    return all(is_colorable_mask(adj, mask & ~(1 << v), r - 1) for v in iter_bits(mask))


def is_critical(g: Graph, r: int | None = None) -> bool:
    if r is None:
        r = chromatic_number(g)[0]
    return is_critical_mask(g.adj, g.vertex_mask, r)


class BoundCheck(NamedTuple):
    lhs: Fraction
    rhs: Fraction
    holds: bool


def turan_bound_check(g: Graph) -> BoundCheck:
    """``e(G) >= n^2 / (2 alpha) - n / 2`` in exact arithmetic."""
    n = g.n
    if n < 1:
        raise ValueError("needs at least one vertex")
    alpha = independence_number(g)
    lhs = Fraction(g.num_edges)
    rhs = Fraction(n * n, 2 * alpha) - Fraction(n, 2)
    return BoundCheck(lhs, rhs, lhs >= rhs)
