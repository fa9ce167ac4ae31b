import networkx as nx
import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from oracles import brute_triangles
from triramsey.graph import (Graph, Graph6Error, GraphError, complement, components, degeneracy_order,
                             disjoint_union, edge_triangle_support, emit_graph6, induced_subgraph, join,
                             neighborhood_graph, parse_graph6, triangle_count)
from triramsey.named import complete, cycle, empty, petersen, wheel


def test_graph6_known_codes():
    assert parse_graph6("D??") == empty(5)
    assert complete(6).graph6 == "E~~w"
    assert parse_graph6(">>graph6<<E~~w\n") == complete(6)
    assert parse_graph6("@").n == 1
    assert parse_graph6("?").n == 0


@given(graphs(max_n=12))
def test_graph6_roundtrip(g):
    assert parse_graph6(emit_graph6(g)) == g


@given(graphs(max_n=12))
def test_graph6_matches_networkx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    ours = emit_graph6(g)
    theirs = nx.to_graph6_bytes(h, header=False).strip()
    assert ours == theirs


def test_graph6_long_size_field():
    g = cycle(70)
    code = emit_graph6(g)
    assert code[0] == 126
    assert parse_graph6(code) == g


@pytest.mark.parametrize("text, offset", [
    ("D?\x10", 2),     # byte below 63
    ("D?", 2),         # truncated bits
    ("D???", 3),       # trailing byte
    ("", 0),
    ("~?", 2),         # incomplete size field
])
def test_graph6_errors_report_offsets(text, offset):
    with pytest.raises(Graph6Error) as info:
        parse_graph6(text)
    assert info.value.offset == offset


def test_graph6_rejects_oversize():
    with pytest.raises(Graph6Error):
        parse_graph6(bytes([126, 63, 66, 65]) + b"?" * 10)


def test_graph_validation():
    with pytest.raises(GraphError):
        Graph(3, [(0, 0)])
    with pytest.raises(GraphError):
        Graph(3, [(0, 3)])
    with pytest.raises(GraphError):
        Graph.from_adjacency([0b10, 0b00])  # asymmetric


@given(graphs(max_n=9))
def test_triangles_against_brute_force(g):
    assert triangle_count(g) == brute_triangles(g)


def test_named_counts():
    assert triangle_count(complete(6)) == 20
    assert triangle_count(petersen()) == 0
    assert wheel(5).num_edges == 10
    assert edge_triangle_support(complete(5)).minimum == 3
    assert edge_triangle_support(empty(3)).minimum is None


@given(graphs(max_n=9))
def test_degeneracy_order_back_degree(g):
    order = degeneracy_order(g)
    assert sorted(order.order) == list(range(g.n))
    assert order.max_forward_degree(g) == order.d
    # the degeneracy is the maximum over subgraphs of the minimum degree
    h = nx.Graph(g.edges())
    h.add_nodes_from(range(g.n))
    core = max(nx.core_number(h).values(), default=0)
    assert order.d == core


@given(graphs(max_n=5), graphs(max_n=5))
def test_join_and_union(a, b):
    j = join(a, b)
    u = disjoint_union(a, b)
    assert j.num_edges == a.num_edges + b.num_edges + a.n * b.n
    assert u.num_edges == a.num_edges + b.num_edges
    assert complement(j) == disjoint_union(complement(a), complement(b))


@given(graphs(max_n=9))
def test_components_partition(g):
    parts = components(g.adj, g.vertex_mask)
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    assert sorted(sorted(c) for c in nx.connected_components(h)) == \
        sorted(sorted(v for v in range(g.n) if m >> v & 1) for m in parts)
    lows = [(m & -m).bit_length() for m in parts]
    assert lows == sorted(lows)


def test_induced_and_neighbourhood():
    g = petersen()
    assert induced_subgraph(g, range(5)) == cycle(5)
    nb = neighborhood_graph(g, 0)
    assert nb.n == 3 and nb.num_edges == 0


@given(graphs(max_n=8), st.data())
def test_without_vertices_is_induced(g, data):
    drop = data.draw(st.sets(st.integers(0, max(0, g.n - 1)), max_size=g.n)) if g.n else set()
    h = g.without_vertices(drop)
    keep = [v for v in range(g.n) if v not in drop]
    assert h == induced_subgraph(g, keep)
