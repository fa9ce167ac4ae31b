"""Deliberately naive reference implementations used as test oracles."""

from itertools import combinations, permutations, product


def edge_set(g):
    return set(g.edges())


def brute_chromatic(g):
    n = g.n
    if n == 0:
        return 0
    edges = g.edges()
    for k in range(1, n + 1):
        for col in product(range(k), repeat=n):
            if all(col[u] != col[v] for u, v in edges):
                return k
    return n


def brute_clique(g):
    es = edge_set(g)
    for k in range(g.n, 0, -1):
        for s in combinations(range(g.n), k):
            if all((a, b) in es for a, b in combinations(s, 2)):
                return k
    return 0


def brute_independence(g):
    es = edge_set(g)
    for k in range(g.n, 0, -1):
        for s in combinations(range(g.n), k):
            if not any((a, b) in es for a, b in combinations(s, 2)):
                return k
    return 0


def brute_triangles(g):
    es = edge_set(g)
    return sum(1 for a, b, c in combinations(range(g.n), 3)
               if (a, b) in es and (a, c) in es and (b, c) in es)


def brute_arrows(g, t):
    """Try every red/blue colouring of the edges."""
    edges = g.edges()
    cliques = [list(combinations(s, 2)) for s in combinations(range(g.n), t)
               if all(e in set(edges) for e in combinations(s, 2))]
    idx = {e: i for i, e in enumerate(edges)}
    for col in product((0, 1), repeat=len(edges)):
        if not any(len({col[idx[e]] for e in cl}) == 1 for cl in cliques):
            return False
    return True


def brute_embeddings(f, g):
    """Injective maps V(F) -> V(G) sending edges to edges."""
    fe = f.edges()
    ge = edge_set(g)
    count = 0
    for img in permutations(range(g.n), f.n):
        if all(((img[u], img[v]) if img[u] < img[v] else (img[v], img[u])) in ge for u, v in fe):
            count += 1
    return count


def brute_two_colorable(b_edges, m):
    for col in product((0, 1), repeat=m):
        if all(len({col[v] for v in e}) > 1 for e in b_edges):
            return True
    return False
