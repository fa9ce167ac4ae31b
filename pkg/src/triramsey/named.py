"""Small named graphs used as fixtures across the package."""

from __future__ import annotations

from itertools import combinations

from .graph import Graph, join


def complete(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def empty(n: int) -> Graph:
    return Graph(n)


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    """Path on ``n`` vertices (``path(3)`` is P_3, two edges)."""
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def wheel(rim: int) -> Graph:
    """Hub 0 joined to a cycle on ``rim`` vertices."""
    return join(complete(1), cycle(rim))


def complete_multipartite(*sizes: int) -> Graph:
    part = []
    for p, s in enumerate(sizes):
        part += [p] * s
    n = len(part)
    return Graph(n, [(u, v) for u, v in combinations(range(n), 2) if part[u] != part[v]])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def grotzsch() -> Graph:
    """Mycielskian of C_5: 11 vertices, triangle-free, chromatic number 4."""
    edges = [(i, (i + 1) % 5) for i in range(5)]
    for i in range(5):
        edges += [(5 + i, (i + 1) % 5), (5 + i, (i - 1) % 5), (5 + i, 10)]
    return Graph(11, edges)


def complete_minus_edge(n: int) -> Graph:
    return complete(n).without_edges([(0, 1)])
