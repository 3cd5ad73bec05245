import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flexcomm.graph import (Graph, GraphParseError, load_edge_list, load_gml,
                            clustering_coefficient, neighbor_fraction,
                            triples_of_node_in_set)

from oracles import brute_triples, random_graph

BRIDGE_EDGES = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]


@pytest.fixture
def bridge():
    return Graph(6, BRIDGE_EDGES)


def test_load_triangle():
    g = load_edge_list("0 1\n1 2\n2 0")
    assert g.node_count == 3
    assert g.edge_count == 3


def test_load_labels_preserved():
    g = load_edge_list("a b\nb c")
    assert g.node_count == 3
    assert g.edge_count == 2
    assert set(g.node_labels) == {"a", "b", "c"}
    assert g.has_edge(g.index_of("a"), g.index_of("b"))
    assert not g.has_edge(g.index_of("a"), g.index_of("c"))


def test_load_is_order_insensitive():
    lines = ["1 2", "2 3", "3 1", "4 1"]
    g1 = load_edge_list("\n".join(lines))
    g2 = load_edge_list("\n".join(reversed(lines)))
    assert g1 == g2
    assert hash(g1) == hash(g2)


def test_load_drops_duplicates_and_self_loops(caplog):
    with caplog.at_level("WARNING"):
        g = load_edge_list("0 1\n1 0\n1 1\n1 2")
    assert g.edge_count == 2
    assert "dropped" in caplog.text


def test_load_rejects_malformed_line():
    with pytest.raises(GraphParseError) as err:
        load_edge_list("0 1\n0 1 2\n")
    assert err.value.line_no == 2


def test_load_comments_ignored():
    g = load_edge_list("# comment\n% other\n0 1\n")
    assert g.edge_count == 1


def test_karate_dataset_shape(karate):
    assert karate.node_count == 34
    assert karate.edge_count == 78


def test_gml_reader_subset():
    text = """
    graph [
      node [ id 1 label "a" ]
      node [ id 2 label "b" ]
      node [ id 3 label "c" ]
      edge [ source 1 target 2 ]
      edge [ source 2 target 3 ]
    ]
    """
    g = load_gml(text)
    assert g.node_count == 3
    assert g.edge_count == 2
    assert g.node_labels == ("a", "b", "c")


def test_gml_rejects_directed():
    with pytest.raises(GraphParseError):
        load_gml("graph [ directed 1 node [ id 1 ] ]")


def test_graph_rejects_self_loop():
    with pytest.raises(ValueError):
        Graph(2, [(0, 0)])


def test_triples_complete_graph():
    k3 = Graph(3, [(0, 1), (1, 2), (0, 2)])
    counts = triples_of_node_in_set(k3, 0, frozenset(range(3)))
    assert (counts.closed, counts.open) == (1, 0)


def test_triples_wedge():
    path = Graph(3, [(0, 1), (1, 2)])
    assert triples_of_node_in_set(path, 1, frozenset(range(3))).open == 1
    assert triples_of_node_in_set(path, 0, frozenset(range(3))).open == 1


def test_triples_bridge_node(bridge):
    counts = triples_of_node_in_set(bridge, 2, frozenset(range(6)))
    assert counts.closed == 1
    assert counts.open == 4
    assert counts.total == 5


def test_triples_requires_membership(bridge):
    with pytest.raises(ValueError):
        triples_of_node_in_set(bridge, 0, frozenset({1, 2}))


def test_neighbor_fraction_examples(bridge):
    assert neighbor_fraction(bridge, 2, frozenset({0, 1, 2})) == pytest.approx(2 / 3)
    assert neighbor_fraction(bridge, 2, frozenset(range(6))) == 1.0
    isolated = Graph(2, [])
    assert neighbor_fraction(isolated, 0, frozenset({0, 1})) == 0.0


def test_clustering_coefficient_examples(bridge):
    k3 = Graph(3, [(0, 1), (1, 2), (0, 2)])
    assert clustering_coefficient(k3, 0) == 1.0
    path = Graph(3, [(0, 1), (1, 2)])
    assert clustering_coefficient(path, 1) == 0.0
    assert clustering_coefficient(bridge, 2) == pytest.approx(1 / 3)


def test_triangle_sum_identity(bridge):
    # per-node triangle counts over the whole graph sum to 3x the triangle count
    total = sum(int(bridge.triangles_total[i]) for i in range(6))
    assert total == 3 * 2


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.floats(0.1, 0.9))
def test_triples_match_bruteforce(seed, density):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 8))
    edges = random_graph(n, density, rng)
    g = Graph(n, edges)
    members = frozenset(int(x) for x in rng.choice(n, size=max(1, n // 2), replace=False))
    for i in members:
        closed, opened = brute_triples(edges, n, i, members)
        counts = triples_of_node_in_set(g, i, members)
        assert counts.closed == closed
        assert counts.open == opened


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_triples_monotone_in_set(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 9))
    g = Graph(n, random_graph(n, 0.5, rng))
    small = set(int(x) for x in rng.choice(n, size=max(1, n // 2), replace=False))
    big = small | {int(x) for x in rng.choice(n, size=n // 2)}
    for i in small:
        c_small = triples_of_node_in_set(g, i, frozenset(small))
        c_big = triples_of_node_in_set(g, i, frozenset(big))
        assert c_big.closed >= c_small.closed
        assert c_big.total >= c_small.total


def test_whole_graph_totals_match_primitives(karate):
    everything = frozenset(range(karate.node_count))
    for i in range(karate.node_count):
        counts = triples_of_node_in_set(karate, i, everything)
        assert int(karate.triangles_total[i]) == counts.closed
        assert int(karate.participation_total[i]) == counts.total


def test_graph_is_immutable(bridge):
    with pytest.raises(AttributeError):
        bridge.node_count = 5
