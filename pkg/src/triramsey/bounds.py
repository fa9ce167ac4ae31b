"""Lower-bound calculus for clique-counting Ramsey problems.

Contents: two-colourability of uniform hypergraphs and the minimum edge count
``m(b)`` of a non-two-colourable ``b``-uniform hypergraph, the fractional
Kruskal-Katona clique bound, and copy counts of forests in graphs of given
minimum degree.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

from .arrowing import UnsupportedError
from .graph import Graph, components, iter_bits


# --- hypergraphs and property B -------------------------------------------------


@dataclass(frozen=True)
class Hypergraph:
    b: int
    m: int  # vertices are 0..m-1
    edges: tuple[frozenset, ...]

    def __post_init__(self):
        seen = set()
        for e in self.edges:
            if len(e) != self.b:
                raise ValueError(f"edge {sorted(e)} does not have {self.b} vertices")
            if any(not 0 <= v < self.m for v in e):
                raise ValueError(f"edge {sorted(e)} leaves the vertex range")
            if e in seen:
                raise ValueError(f"duplicate edge {sorted(e)}")
            seen.add(e)

    @classmethod
    def from_edges(cls, b: int, edges, m: int | None = None) -> "Hypergraph":
        es = tuple(sorted((frozenset(e) for e in edges), key=sorted))
        if m is None:
            m = 1 + max((max(e) for e in es), default=-1)
        return cls(b, m, es)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def to_json(self) -> str:
        return json.dumps({"b": self.b, "vertices": self.m, "edges": [sorted(e) for e in self.edges]})

    @classmethod
    def from_json(cls, text: str) -> "Hypergraph":
        data = json.loads(text)
        return cls.from_edges(int(data["b"]), data["edges"], int(data["vertices"]))


def is_proper_two_coloring(h: Hypergraph, coloring) -> bool:
    return all(len({coloring[v] for v in e}) > 1 for e in h.edges)


def _hyper_components(h: Hypergraph) -> list[list[int]]:
    # reuse graph components on the 2-section
    rows = [0] * h.m
    for e in h.edges:
        mask = 0
        for v in e:
            mask |= 1 << v
        for v in e:
            rows[v] |= mask & ~(1 << v)
    return [list(iter_bits(c)) for c in components(tuple(rows), (1 << h.m) - 1)]


def has_property_b(h: Hypergraph) -> tuple[int, ...] | None:
    """A 0/1 vertex colouring with no monochromatic edge, or ``None`` if none exists.

    Components are solved independently; the least vertex of each one is fixed
    to colour 0 since swapping colours preserves properness.
    """
    if h.b == 0:
        return None if h.edges else tuple([0] * h.m)
    color = [0] * h.m
    # edges indexed by their largest vertex: checked once that vertex is coloured
    closing: dict[int, list[tuple[int, ...]]] = {}
    for e in h.edges:
        closing.setdefault(max(e), []).append(tuple(e))
    for comp in _hyper_components(h):
        if not _color_component(comp, closing, color):
            return None
    return tuple(color)


def _color_component(comp, closing, color) -> bool:
    def ok(v):
        for e in closing.get(v, ()):
            c = color[e[0]]
            if all(color[u] == c for u in e):
                return False
        return True

    def rec(i):
        if i == len(comp):
            return True
        v = comp[i]
        for c in ((0,) if i == 0 else (0, 1)):
            color[v] = c
            if ok(v) and rec(i + 1):
                return True
        color[v] = 0
        return False

    return rec(0)


def _vertex_kernel(b: int, m: int) -> int:
    """Vertex bound for an edge-minimal non-2-colourable ``b``-uniform hypergraph with ``m`` edges.

    In such a hypergraph every vertex has degree at least 2 (a vertex lying in a
    single edge can always be recoloured to fix that edge), so ``2V <= b m``.
    """
    return max(b, (b * m) // 2)


class _CoverSearch:
    """Choose ``m`` of the ``b``-subsets of ``range(V)`` so every colouring is monochromatic on one.

    Colourings are those with vertex 0 red, numbered by the colours of vertices
    ``1..V-1``; each candidate edge is the bitmask of colourings it spoils.
    """

    def __init__(self, b: int, V: int):
        self.b, self.V = b, V
        self.ncol = 1 << (V - 1)
        self.full = (1 << self.ncol) - 1
        self.subsets = list(combinations(range(V), b))
        self.kill = []
        for e in self.subsets:
            mask = 0
            for x in range(self.ncol):
                col = [0] + [(x >> (v - 1)) & 1 for v in range(1, V)]
                c = col[e[0]]
                if all(col[u] == c for u in e):
                    mask |= 1 << x
            self.kill.append(mask)
        # covering lists: colouring -> candidate edge indices
        self.covers = [[i for i, k in enumerate(self.kill) if k >> x & 1] for x in range(self.ncol)]
        self.per_edge = max((k.bit_count() for k in self.kill), default=0)
        self.nodes = 0

    def top_branches(self) -> list[tuple[int, int, list[int]]]:
        """(covered, banned, chosen) states one level below the fixed first edge ``{0..b-1}``.

        Exploring them in order reproduces the sequential search exactly.
        """
        covered, banned = self.kill[0], 1
        if covered == self.full:
            return [(covered, banned, [0])]
        rest = self.full & ~covered
        best_opts = None
        for x in iter_bits(rest):
            opts = [i for i in self.covers[x] if not banned >> i & 1]
            if best_opts is None or len(opts) < len(best_opts):
                best_opts = opts
        out = []
        ban = banned
        for i in best_opts:
            out.append((covered | self.kill[i], ban | (1 << i), [0, i]))
            ban |= 1 << i
        return out

    def solve(self, m: int, covered: int, banned: int, chosen: list[int]) -> list[int] | None:
        self.nodes += 1
        if len(chosen) > m:
            return None
        if covered == self.full:
            return chosen
        left = m - len(chosen)
        if left <= 0:
            return None
        missing = (self.full & ~covered).bit_count()
        if missing > left * self.per_edge:
            return None
        # uncovered colouring with the fewest usable covering edges
        best_opts = None
        rest = self.full & ~covered
        while rest:
            low = rest & -rest
            x = low.bit_length() - 1
            rest ^= low
            opts = [i for i in self.covers[x] if not banned >> i & 1]
            if best_opts is None or len(opts) < len(best_opts):
                best_opts = opts
                if len(opts) <= 1:
                    break
        if not best_opts:
            return None
        gain = max((self.kill[i] & ~covered).bit_count() for i in best_opts)
        if missing > gain + (left - 1) * self.per_edge:
            return None
        ban = banned
        for i in best_opts:
            found = self.solve(m, covered | self.kill[i], ban | (1 << i), chosen + [i])
            if found is not None:
                return found
            ban |= 1 << i  # later siblings exclude earlier choices
        return None


@lru_cache(maxsize=8)
def _cover_tables(b: int, V: int) -> _CoverSearch:
    return _CoverSearch(b, V)


def _search_task(args):
    b, V, m, branch = args
    s = _cover_tables(b, V)
    branches = s.top_branches()
    todo = branches if branch is None else [branches[branch]]
    for covered, banned, chosen in todo:
        found = s.solve(m, covered, banned, chosen)
        if found is not None:
            return [s.subsets[i] for i in found], s.nodes
    return None, s.nodes


def _search(b: int, V: int, m: int, jobs: int = 1):
    if jobs <= 1:
        return _search_task((b, V, m, None))[0]
    count = len(_cover_tables(b, V).top_branches())
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for edges, _ in pool.map(_search_task, [(b, V, m, k) for k in range(count)]):
            if edges is not None:
                return edges  # first success in branch order, as in the sequential search
    return None


def non_two_colorable_exists(b: int, m: int, V: int | None = None) -> Hypergraph | None:
    """Exhaustively decide whether some ``b``-uniform hypergraph with at most ``m`` edges on
    ``V`` vertices (default: the kernel bound) lacks property B; return a witness."""
    if V is None:
        V = _vertex_kernel(b, m)
    if V < b or m < 1:
        return None
    edges = _search(b, V, m)
    if edges is None:
        return None
    return Hypergraph.from_edges(b, edges, V)


@dataclass(frozen=True)
class PropertyBResult:
    b: int
    m: int
    witness: Hypergraph
    refuted: tuple[int, ...]  # edge counts shown infeasible by exhaustive search


@lru_cache(maxsize=None)
def property_b_search(b: int, jobs: int = 1) -> PropertyBResult:
    """``m(b)`` for ``b <= 3`` with a minimum-vertex witness.

    Edge counts below ``2^(b-1)`` are excluded by the union bound (a random
    colouring spoils each edge with probability ``2^(1-b)``); counts from there
    up are refuted or realised by exhaustive set-cover search on the vertex kernel.
    """
    if b < 1:
        raise ValueError("b must be positive")
    if b >= 4:
        raise UnsupportedError(f"m({b}) is beyond exhaustive range")
    if b == 1:
        return PropertyBResult(1, 1, Hypergraph.from_edges(1, [(0,)]), ())
    m = 1 << (b - 1)
    refuted = []
    while True:
        edges = _search(b, _vertex_kernel(b, m), m, jobs)
        if edges is not None:
            break
        refuted.append(m)
        m += 1
    # smallest vertex count with a witness, for a readable certificate
    for V in range(b, _vertex_kernel(b, m) + 1):
        w = non_two_colorable_exists(b, m, V)
        if w is not None:
            break
    if has_property_b(w) is not None:
        raise AssertionError("witness is two-colourable")
    return PropertyBResult(b, m, w, tuple(refuted))


def property_b_min_edges(b: int) -> int:
    return property_b_search(b).m


def fano_plane() -> Hypergraph:
    lines = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]
    return Hypergraph.from_edges(3, lines, 7)


# --- clique bounds -------------------------------------------------------------


def kk_clique_bound(count_t: int, t: int, s: int) -> float:
    """``count_t ** (s / t)``: fractional bound on ``K_s`` copies given ``count_t`` copies of ``K_t``."""
    if s > t:
        raise ValueError("s must not exceed t")
    if s < 1 or count_t < 0:
        raise ValueError("need s >= 1 and count_t >= 0")
    return float(count_t) ** (s / t)


@dataclass(frozen=True)
class CliqueRamseyBound:
    s: int
    t: int
    b: int
    via_mb: float | None
    via_power: float
    flagged: bool  # m(b) not computable at this size

    def to_dict(self) -> dict:
        return {"s": self.s, "t": self.t, "b": self.b, "via_mb": self.via_mb,
                "via_power": self.via_power, "mb_unavailable": self.flagged}


def clique_ramsey_lower_bound(s: int, t: int) -> CliqueRamseyBound:
    """Lower bounds on the least number of ``K_s`` in a ``K_t``-arrowing graph:
    ``m(C(t,2)) ** (s/t)`` and ``2 ** (s(t-1)/2 - 1)``."""
    if not 1 <= s <= t:
        raise ValueError("need 1 <= s <= t")
    b = math.comb(t, 2)
    power = 2.0 ** (s * (t - 1) / 2 - 1)
    try:
        mb = property_b_min_edges(b)
    except UnsupportedError:
        return CliqueRamseyBound(s, t, b, None, power, True)
    via = float(mb) ** (s / t)
    if via < power * (1 - 1e-12):
        raise AssertionError(f"m(b)^(s/t) = {via} below 2^(s(t-1)/2-1) = {power}")
    return CliqueRamseyBound(s, t, b, via, power, False)


# --- forests -------------------------------------------------------------------


def _is_forest(g: Graph) -> bool:
    return g.num_edges == g.n - len(components(g.adj, g.vertex_mask))


def automorphism_count(g: Graph) -> int:
    """Brute force over all vertex permutations."""
    edges = set(g.edges())
    deg = g.degrees()
    count = 0
    for p in permutations(range(g.n)):
        if any(deg[p[v]] != deg[v] for v in range(g.n)):
            continue
        if all(((p[u], p[v]) if p[u] < p[v] else (p[v], p[u])) in edges for u, v in edges):
            count += 1
    return count


def leaf_elimination_order(g: Graph) -> tuple[int, ...]:
    """Repeatedly strip the least leaf (or isolated vertex); the reverse order gives
    each vertex at most one earlier neighbour."""
    adj = list(g.adj)
    alive = g.vertex_mask
    removed = []
    while alive:
        for v in iter_bits(alive):
            if (adj[v] & alive).bit_count() <= 1:
                break
        else:
            raise ValueError("graph has a cycle")
        removed.append(v)
        alive &= ~(1 << v)
    return tuple(reversed(removed))


@dataclass(frozen=True)
class ForestPattern:
    graph: Graph
    order: tuple[int, ...]
    aut: int

    @classmethod
    def of(cls, g: Graph) -> "ForestPattern":
        if not _is_forest(g):
            raise ValueError("pattern is not a forest")
        order = leaf_elimination_order(g)
        pos = {v: i for i, v in enumerate(order)}
        for v in order:
            if sum(1 for u in iter_bits(g.adj[v]) if pos[u] < pos[v]) > 1:
                raise AssertionError("elimination order has a vertex with two back-neighbours")
        aut = automorphism_count(g)
        if math.factorial(g.n) % aut:
            raise AssertionError("|Aut| does not divide |F|!")
        return cls(g, order, aut)

    @property
    def n(self) -> int:
        return self.graph.n

    def parents(self) -> list[int | None]:
        """Back-neighbour (as a position) of each position in the order, or None."""
        pos = {v: i for i, v in enumerate(self.order)}
        out = []
        for v in self.order:
            back = [pos[u] for u in iter_bits(self.graph.adj[v]) if pos[u] < pos[v]]
            out.append(back[0] if back else None)
        return out


def _falling(n: int, k: int) -> int:
    return math.perm(n, k) if 0 <= k <= n else 0


def count_forest_copies(f: ForestPattern, g: Graph) -> tuple[int, int]:
    """(labeled embeddings of F as a subgraph of G, unlabeled copies)."""
    if f.n > g.n:
        return 0, 0
    parents = f.parents()
    # isolated pattern vertices only multiply by a falling factorial at the end
    isolated = {i for i, v in enumerate(f.order) if not f.graph.adj[v]}
    core = [i for i in range(f.n) if i not in isolated]
    remap = {i: j for j, i in enumerate(core)}
    par = [None if parents[i] is None else remap[parents[i]] for i in core]
    k = len(core)
    adj = g.adj
    allv = g.vertex_mask
    image = [0] * k

    def rec(i: int, used: int) -> int:
        p = par[i]
        cand = (allv if p is None else adj[image[p]]) & ~used
        if i == k - 1:
            return cand.bit_count()
        total = 0
        while cand:
            low = cand & -cand
            image[i] = low.bit_length() - 1
            cand ^= low
            total += rec(i + 1, used | low)
        return total

    labeled = rec(0, 0) if k else 1
    labeled *= _falling(g.n - k, len(isolated))
    if labeled % f.aut:
        raise AssertionError("labeled count not divisible by |Aut(F)|")
    return labeled, labeled // f.aut


def forest_copy_lower_bound(f: ForestPattern, d: int) -> int:
    """``prod_{i=1}^{|F|} (d - i + 2) / |Aut(F)|``, clamped at 0."""
    prod = 1
    for i in range(1, f.n + 1):
        prod *= max(0, d - i + 2)
    if prod % f.aut:
        raise AssertionError("product not divisible by |Aut(F)|")
    return prod // f.aut


@dataclass(frozen=True)
class ForestCheck:
    count: int
    reference: int  # copies in K_{delta+1}
    bound: int
    holds: bool
    reference_matches_bound: bool


def check_forest_copies(f: ForestPattern, g: Graph) -> ForestCheck:
    from .named import complete

    d = g.min_degree() if g.n else 0
    _, count = count_forest_copies(f, g)
    _, ref = count_forest_copies(f, complete(d + 1))
    bound = forest_copy_lower_bound(f, d)
    return ForestCheck(count, ref, bound, count >= ref, ref == bound)


@lru_cache(maxsize=None)
def small_forests(max_n: int) -> tuple[ForestPattern, ...]:
    from .corpus import small_graphs

    return tuple(ForestPattern.of(g) for g in small_graphs(max_n) if _is_forest(g))


# --- 2-density -----------------------------------------------------------------


def two_density(g: Graph) -> Fraction:
    """``max (e(H) - 1) / (|H| - 2)`` over induced subgraphs ``H`` with at least 3 vertices.

    Graphs on fewer than three vertices get ``1/2`` for a single edge and 0 otherwise.
    """
    from .graph import edges_within

    if g.n < 3:
        return Fraction(1, 2) if g.num_edges else Fraction(0)
    best = None
    for mask in range(1 << g.n):
        k = mask.bit_count()
        if k < 3:
            continue
        val = Fraction(edges_within(g.adj, mask) - 1, k - 2)
        if best is None or val > best:
            best = val
    return best


# --- reports -------------------------------------------------------------------


def bound_report(name: str, value, formula: str, inputs: dict) -> dict:
    if isinstance(value, Fraction):
        value = str(value)
    return {"name": name, "value": value, "formula": formula, "inputs": inputs}
