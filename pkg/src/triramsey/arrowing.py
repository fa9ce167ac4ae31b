"""Ramsey arrowing ``G -> (K_t, K_t)`` with verified certificates.

A negative answer always comes with a red/blue edge colouring that is checked
independently (maximum clique of each colour class).  A positive answer means
the backtracking search was exhausted.  Searches that run out of budget say so.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .graph import Graph, induced_subgraph, iter_bits
from .solvers import ProperColoring, max_clique_mask

RED, BLUE = "red", "blue"

Edge = tuple[int, int]


class UnsupportedError(ValueError):
    pass


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class EdgeTwoColoring:
    colors: Mapping[Edge, str]

    def __getitem__(self, e: Edge) -> str:
        return self.colors[_edge(*e)]

    def color_class(self, g: Graph, color: str) -> Graph:
        return Graph(g.n, [e for e, c in self.colors.items() if c == color])

    def to_json(self) -> str:
        return json.dumps({"edges": [[u, v, c] for (u, v), c in sorted(self.colors.items())]})

    @classmethod
    def from_json(cls, text: str) -> "EdgeTwoColoring":
        data = json.loads(text)
        return cls({_edge(u, v): c for u, v, c in data["edges"]})


def has_monochromatic_clique(g: Graph, coloring: EdgeTwoColoring, t: int) -> bool:
    """Independent verifier: clique number of each colour class against ``t``."""
    if set(coloring.colors) != set(g.edges()):
        raise ValueError("colouring is not total on E(G)")
    if any(c not in (RED, BLUE) for c in coloring.colors.values()):
        raise ValueError("colours must be 'red' or 'blue'")
    for color in (RED, BLUE):
        h = coloring.color_class(g, color)
        if max_clique_mask(h.adj, h.vertex_mask).bit_count() >= t:
            return True
    return False


@dataclass
class ArrowingResult:
    arrows: bool | None  # None: undecided within budget
    certificate: EdgeTwoColoring | None = None
    nodes_explored: int = 0
    t: int = 3

    @property
    def decided(self) -> bool:
        return self.arrows is not None

    def to_dict(self) -> dict:
        out: dict = {"arrows": self.arrows, "decided": self.decided, "t": self.t,
                     "nodes_explored": self.nodes_explored}
        if self.certificate is not None:
            out["certificate"] = json.loads(self.certificate.to_json())
        return out


# --- clique enumeration -------------------------------------------------------


def iter_cliques(adj, mask: int, s: int):
    """Yield every ``s``-clique inside ``mask`` as a bitmask."""
    if s == 0:
        yield 0
        return

    def rec(clique: int, size: int, cand: int):
        if size == s:
            yield clique
            return
        rest = cand
        while rest and rest.bit_count() >= s - size:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            yield from rec(clique | low, size + 1, adj[v] & rest)

    yield from rec(0, 0, mask)


def count_clique_copies(g: Graph, s: int) -> int:
    if s < 1:
        raise ValueError("s must be at least 1")
    if s == 1:
        return g.n
    if s == 2:
        return g.num_edges
    return _count_cliques(g.adj, g.vertex_mask, s)


def _count_cliques(adj, cand: int, s: int) -> int:
    if s == 1:
        return cand.bit_count()
    total = 0
    rest = cand
    while rest and rest.bit_count() >= s:
        low = rest & -rest
        v = low.bit_length() - 1
        rest ^= low
        total += _count_cliques(adj, adj[v] & rest, s - 1)
    return total


def cliques_through_edge(g: Graph, u: int, v: int, t: int) -> int:
    common = g.adj[u] & g.adj[v]
    if t == 2:
        return 1
    return _count_cliques(g.adj, common, t - 2) if t > 3 else common.bit_count()


def critical_edge_double_cover_check(g: Graph, t: int) -> bool:
    """Every edge lies in at least two distinct copies of ``K_t``."""
    return all(cliques_through_edge(g, u, v, t) >= 2 for u, v in g.edges())


# --- search -------------------------------------------------------------------


class _Search:
    """Backtracking over edges with unit propagation on ``K_t`` constraints.

    ``cnt[c][col]`` counts edges of clique ``c`` currently coloured ``col``;
    a clique is violated when one colour reaches its size, and forces its last
    free edge the other way when one colour holds all but one edge.
    """

    def __init__(self, g: Graph, t: int, budget: int | None):
        self.g = g
        self.t = t
        self.budget = budget
        edges = g.edges()
        index = {e: i for i, e in enumerate(edges)}
        cliques = []
        for cmask in iter_cliques(g.adj, g.vertex_mask, t):
            vs = list(iter_bits(cmask))
            cliques.append([index[e] for e in combinations(vs, 2)])
        self.edges = edges
        self.cliques = cliques
        self.size = t * (t - 1) // 2
        members: list[list[int]] = [[] for _ in edges]
        for ci, es in enumerate(cliques):
            for e in es:
                members[e].append(ci)
        self.members = members
        # most-constrained edges first, lexicographic on ties
        self.order = sorted((e for e in range(len(edges)) if members[e]),
                            key=lambda e: (-len(members[e]), edges[e]))
        self.color = [-1] * len(edges)
        self.cnt = [[0, 0] for _ in cliques]
        self.trail: list[int] = []
        self.nodes = 0

    def _assign(self, e: int, col: int) -> bool:
        queue = [(e, col)]
        color, cnt, cliques, size, trail = self.color, self.cnt, self.cliques, self.size, self.trail
        while queue:
            e, col = queue.pop()
            cur = color[e]
            if cur != -1:
                if cur != col:
                    return False
                continue
            color[e] = col
            trail.append(e)
            conflict = False
            for ci in self.members[e]:
                c = cnt[ci]
                c[col] += 1
                if c[col] == size:
                    conflict = True
                elif c[col] == size - 1 and c[1 - col] == 0:
                    for f in cliques[ci]:
                        if color[f] == -1:
                            queue.append((f, 1 - col))
                            break
            if conflict:
                return False
        return True

    def _undo(self, mark: int) -> None:
        color, cnt, trail = self.color, self.cnt, self.trail
        while len(trail) > mark:
            e = trail.pop()
            col = color[e]
            for ci in self.members[e]:
                cnt[ci][col] -= 1
            color[e] = -1

    def run(self) -> bool | None:
        """True if a K_t-free colouring exists, False if none, None if over budget."""
        if not self.order:
            return True
        if self.size == 1:
            return False
        color = self.color
        decisions: list[tuple[int, int, int]] = []  # (edge, colour, trail mark)
        first = self.order[0]
        pos = 0
        ok = self._assign(first, 0)
        self.nodes = 1
        if not ok:
            return False
        decisions.append((first, 0, 0))
        while True:
            while pos < len(self.order) and color[self.order[pos]] != -1:
                pos += 1
            if pos == len(self.order):
                return True
            if self.budget is not None and self.nodes >= self.budget:
                return None
            e = self.order[pos]
            mark = len(self.trail)
            self.nodes += 1
            if self._assign(e, 0):
                decisions.append((e, 0, mark))
                continue
            self._undo(mark)
            if self._assign(e, 1):
                decisions.append((e, 1, mark))
                continue
            self._undo(mark)
            # backtrack to the latest red decision that can flip
            while True:
                if not decisions:
                    return False
                de, dc, dmark = decisions.pop()
                self._undo(dmark)
                if de == first:
                    return False
                pos = min(pos, self.order.index(de))
                if dc == 0:
                    self.nodes += 1
                    if self._assign(de, 1):
                        decisions.append((de, 1, dmark))
                        break
                    self._undo(dmark)

    def certificate(self) -> EdgeTwoColoring:
        return EdgeTwoColoring({e: (BLUE if self.color[i] == 1 else RED)
                                for i, e in enumerate(self.edges)})


def arrows(g: Graph, t: int, budget: int | None = None) -> ArrowingResult:
    """Decide whether every red/blue colouring of ``E(G)`` has a monochromatic ``K_t``."""
    if t < 2:
        raise ValueError("t must be at least 2")
    search = _Search(g, t, budget)
    found = search.run()
    if found is None:
        return ArrowingResult(None, None, search.nodes, t)
    if found:
        cert = search.certificate()
        if has_monochromatic_clique(g, cert, t):
            raise AssertionError("search produced an invalid certificate")
        return ArrowingResult(False, cert, search.nodes, t)
    return ArrowingResult(True, None, search.nodes, t)


def ramsey_number(t: int) -> int:
    """Least ``n`` with ``K_n -> (K_t, K_t)``; only ``t <= 3`` is searched."""
    from .named import complete

    if t < 2:
        raise ValueError("t must be at least 2")
    if t >= 4:
        raise UnsupportedError(f"r(K_{t}) is out of exhaustive range")
    n = 1
    while not arrows(complete(n), t).arrows:
        n += 1
    return n


def pentagon_coloring() -> EdgeTwoColoring:
    """The 2-colouring of K_5 with a red pentagon and a blue pentagram."""
    return EdgeTwoColoring({e: (RED if (e[1] - e[0]) % 5 in (1, 4) else BLUE)
                            for e in combinations(range(5), 2)})


def lift_coloring(g: Graph, c: ProperColoring, phi: EdgeTwoColoring) -> EdgeTwoColoring:
    """Colour ``{u, v}`` by ``phi({c(u), c(v)})``."""
    out = {}
    for u, v in g.edges():
        a, b = c.assignment[u], c.assignment[v]
        if a == b:
            raise ValueError(f"colouring not proper: edge ({u}, {v}) inside class {a}")
        try:
            out[(u, v)] = phi[(a, b)]
        except KeyError:
            raise ValueError(f"phi has no value on class pair {_edge(a, b)}") from None
    return EdgeTwoColoring(out)


# --- reduction to a Ramsey-critical core ---------------------------------------


@dataclass
class Reduction:
    graph: Graph
    vertices: tuple[int, ...]  # original label of each vertex of ``graph``
    complete: bool
    removed_edges: list[Edge] = field(default_factory=list)


def edges_in_cliques(g: Graph, t: int) -> set[Edge]:
    keep = set()
    for cmask in iter_cliques(g.adj, g.vertex_mask, t):
        keep.update(combinations(list(iter_bits(cmask)), 2))
    return keep


def ramsey_critical_reduce(g: Graph, t: int, budget: int | None = None) -> Reduction:
    """Delete edges greedily (lexicographic order) while ``K_t``-arrowing survives.

    Arrowing is monotone under adding edges, so an edge that could not be deleted
    never becomes deletable later and a single pass is enough.
    """
    start = arrows(g, t, budget)
    if start.arrows is not True:
        raise ValueError("graph does not arrow K_t (or undecided within budget)")
    keep = edges_in_cliques(g, t)
    removed = [e for e in g.edges() if e not in keep]
    cur = g.without_edges(removed)
    complete = True
    for e in cur.edges():
        trial = cur.without_edges([e])
        res = arrows(trial, t, budget)
        if res.arrows is None:
            complete = False
        elif res.arrows:
            cur = trial
            removed.append(e)
    alive = [v for v in range(cur.n) if cur.adj[v]]
    return Reduction(induced_subgraph(cur, alive), tuple(alive), complete, removed)


def monochromatic_free_colorings_exist(g: Graph, t: int, budget: int | None = None) -> bool | None:
    res = arrows(g, t, budget)
    return None if res.arrows is None else not res.arrows


def coloring_from_pairs(pairs: Iterable[tuple[int, int, str]]) -> EdgeTwoColoring:
    return EdgeTwoColoring({_edge(u, v): c for u, v, c in pairs})
