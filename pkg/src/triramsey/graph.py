"""Immutable simple graphs on at most 128 vertices, stored as adjacency bitmasks.

Row ``adj[v]`` is a Python int whose bit ``u`` is set iff ``{u, v}`` is an edge.
Everything else in the package works on these rows, so the helpers at the bottom
(``iter_bits``, ``edges_within`` ...) are the shared low-level kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_VERTICES = 128

VertexSet = frozenset  # subsets of a host graph's vertex range


class GraphError(ValueError):
    pass


class Graph6Error(GraphError):
    """Malformed graph6 input; ``offset`` is the index of the offending byte."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def edges_within(adj: Sequence[int], mask: int) -> int:
    """Number of edges of the subgraph induced by ``mask``."""
    total = 0
    for v in iter_bits(mask):
        total += (adj[v] & mask).bit_count()
    return total // 2


def triangles_within(adj: Sequence[int], mask: int) -> int:
    total = 0
    for u in iter_bits(mask):
        higher = adj[u] & mask & ~((2 << u) - 1)
        for v in iter_bits(higher):
            total += (adj[v] & higher & ~((2 << v) - 1)).bit_count()
    return total


class Graph:
    """Undirected simple graph with vertices ``0..n-1``.

    Instances never change after construction; operations that "delete"
    something return a new graph.
    """

    __slots__ = ("_n", "_adj", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if not 0 <= n <= MAX_VERTICES:
            raise GraphError(f"vertex count {n} outside 0..{MAX_VERTICES}")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self._n = n
        self._adj = tuple(adj)
        self._hash = None

    @classmethod
    def from_adjacency(cls, rows: Sequence[int]) -> "Graph":
        n = len(rows)
        if n > MAX_VERTICES:
            raise GraphError(f"vertex count {n} exceeds {MAX_VERTICES}")
        full = (1 << n) - 1
        for v, row in enumerate(rows):
            if row & ~full or row >> v & 1:
                raise GraphError(f"row {v} has out-of-range bits or a self-loop")
            for u in iter_bits(row):
                if not rows[u] >> v & 1:
                    raise GraphError(f"adjacency not symmetric at ({u}, {v})")
        g = cls.__new__(cls)
        g._n = n
        g._adj = tuple(rows)
        g._hash = None
        return g

    @classmethod
    def from_graph6(cls, text: bytes | str) -> "Graph":
        return parse_graph6(text)

    @property
    def n(self) -> int:
        return self._n

    @property
    def adj(self) -> tuple[int, ...]:
        return self._adj

    @property
    def vertex_mask(self) -> int:
        return (1 << self._n) - 1

    def __len__(self) -> int:
        return self._n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._adj)
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, e={self.num_edges}, g6={self.graph6!r})"

    @property
    def graph6(self) -> str:
        return emit_graph6(self).decode("ascii")

    @property
    def num_edges(self) -> int:
        return sum(r.bit_count() for r in self._adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        out = []
        for u, row in enumerate(self._adj):
            for v in iter_bits(row >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u] >> v & 1)

    def neighbors(self, v: int) -> VertexSet:
        return frozenset(iter_bits(self._adj[v]))

    def degree(self, v: int) -> int:
        return self._adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self._adj]

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def without_edges(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = list(self._adj)
        for u, v in edges:
            rows[u] &= ~(1 << v)
            rows[v] &= ~(1 << u)
        return Graph.from_adjacency(rows)

    def with_edges(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self._n, list(self.edges()) + list(edges))

    def without_vertices(self, vertices: Iterable[int]) -> "Graph":
        drop = mask_of(vertices)
        return induced_subgraph(self, self.vertex_mask & ~drop)


# --- graph6 -----------------------------------------------------------------

_HEADER = b">>graph6<<"


def _as_bytes(text: bytes | str) -> bytes:
    if isinstance(text, str):
        text = text.encode("ascii")
    return text


def parse_graph6(text: bytes | str) -> Graph:
    """Parse one graph6 line (optional header, trailing newline tolerated)."""
    data = _as_bytes(text)
    base = 0
    if data.startswith(_HEADER):
        base = len(_HEADER)
    data = data.rstrip(b"\r\n")
    for i in range(base, len(data)):
        if not 63 <= data[i] <= 126:
            raise Graph6Error(f"byte value {data[i]} outside 63..126", i)
    pos = base
    if pos >= len(data):
        raise Graph6Error("truncated: missing vertex count", pos)
    if data[pos] < 126:
        n = data[pos] - 63
        pos += 1
    else:
        if pos + 1 >= len(data):
            raise Graph6Error("truncated: incomplete vertex count", len(data))
        if data[pos + 1] < 126:
            width, start = 3, pos + 1
        else:
            width, start = 6, pos + 2
        if start + width > len(data):
            raise Graph6Error("truncated: incomplete vertex count", len(data))
        n = 0
        for b in data[start:start + width]:
            n = (n << 6) | (b - 63)
        pos = start + width
    if n > MAX_VERTICES:
        raise Graph6Error(f"vertex count {n} exceeds {MAX_VERTICES}", base)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(data) - pos < nbytes:
        raise Graph6Error("truncated bit stream", len(data))
    if len(data) - pos > nbytes:
        raise Graph6Error("trailing bytes after graph", pos + nbytes)
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = data[pos + k // 6] - 63
            if byte >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    return Graph.from_adjacency(rows)


def _encode_n(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])


def emit_graph6(g: Graph) -> bytes:
    """Canonical graph6: no header, minimal size field, zero padding bits."""
    n = g.n
    adj = g.adj
    out = bytearray(_encode_n(n))
    acc = 0
    k = 0
    for j in range(1, n):
        for i in range(j):
            acc = (acc << 1) | (adj[i] >> j & 1)
            k += 1
            if k == 6:
                out.append(acc + 63)
                acc = k = 0
    if k:
        out.append((acc << (6 - k)) + 63)
    return bytes(out)


# --- counting and structure -------------------------------------------------


def triangle_count(g: Graph) -> int:
    return triangles_within(g.adj, g.vertex_mask)


@dataclass(frozen=True)
class EdgeSupport:
    support: dict[tuple[int, int], int]
    minimum: int | None  # None for an edgeless graph


def edge_triangle_support(g: Graph) -> EdgeSupport:
    adj = g.adj
    support = {(u, v): (adj[u] & adj[v]).bit_count() for u, v in g.edges()}
    return EdgeSupport(support, min(support.values(), default=None))


@dataclass(frozen=True)
class DegeneracyOrder:
    order: tuple[int, ...]
    d: int

    def positions(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}

    def forward_masks(self, g: Graph) -> dict[int, int]:
        """``N+(v)``: neighbours of ``v`` that come earlier in the order."""
        seen = 0
        out = {}
        for v in self.order:
            out[v] = g.adj[v] & seen
            seen |= 1 << v
        return out

    def max_forward_degree(self, g: Graph) -> int:
        return max((m.bit_count() for m in self.forward_masks(g).values()), default=0)


def degeneracy_order(g: Graph) -> DegeneracyOrder:
    """Minimum-degree peeling (smallest index on ties), emitted in reverse."""
    adj = g.adj
    alive = g.vertex_mask
    removed = []
    d = 0
    while alive:
        best, best_deg = -1, None
        for v in iter_bits(alive):
            dv = (adj[v] & alive).bit_count()
            if best_deg is None or dv < best_deg:
                best, best_deg = v, dv
        d = max(d, best_deg)
        removed.append(best)
        alive &= ~(1 << best)
    return DegeneracyOrder(tuple(reversed(removed)), d)


def join(a: Graph, b: Graph) -> Graph:
    """Disjoint union plus every edge between the parts; ``b`` is shifted by ``|a|``."""
    na, nb = a.n, b.n
    if na + nb > MAX_VERTICES:
        raise GraphError(f"join would have {na + nb} > {MAX_VERTICES} vertices")
    b_all = ((1 << nb) - 1) << na
    rows = [r | b_all for r in a.adj] + [(r << na) | ((1 << na) - 1) for r in b.adj]
    return Graph.from_adjacency(rows)


def disjoint_union(a: Graph, b: Graph) -> Graph:
    na = a.n
    return Graph.from_adjacency(list(a.adj) + [r << na for r in b.adj])


def _to_mask(g: Graph, s: int | Iterable[int]) -> int:
    if isinstance(s, int):
        m = s
    else:
        m = 0
        for v in s:
            if not 0 <= v < g.n:
                raise GraphError(f"vertex {v} out of range for n={g.n}")
            m |= 1 << v
    if m & ~g.vertex_mask:
        raise GraphError("vertex set out of range")
    return m


def induced_adjacency(adj: Sequence[int], mask: int) -> list[int]:
    """Rows of the induced subgraph, relabelled to ``0..|mask|-1`` ascending."""
    verts = list(iter_bits(mask))
    index = {v: i for i, v in enumerate(verts)}
    rows = []
    for v in verts:
        r = 0
        for u in iter_bits(adj[v] & mask):
            r |= 1 << index[u]
        rows.append(r)
    return rows


def induced_subgraph(g: Graph, s: int | Iterable[int]) -> Graph:
    m = _to_mask(g, s)
    if m == g.vertex_mask:
        return g
    return Graph.from_adjacency(induced_adjacency(g.adj, m))


def neighborhood_graph(g: Graph, v: int) -> Graph:
    return induced_subgraph(g, g.adj[v])


def complement(g: Graph) -> Graph:
    full = g.vertex_mask
    return Graph.from_adjacency([full & ~r & ~(1 << v) for v, r in enumerate(g.adj)])


def components(adj: Sequence[int], mask: int) -> list[int]:
    """Connected components of the subgraph induced by ``mask``, ordered by least vertex."""
    out = []
    rest = mask
    while rest:
        comp = rest & -rest
        frontier = comp
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= adj[v]
            frontier = nxt & rest & ~comp
            comp |= frontier
        out.append(comp)
        rest &= ~comp
    return out


def is_independent(adj: Sequence[int], mask: int) -> bool:
    return all(not adj[v] & mask for v in iter_bits(mask))


def is_clique(adj: Sequence[int], mask: int) -> bool:
    return all((adj[v] | (1 << v)) & mask == mask for v in iter_bits(mask))
