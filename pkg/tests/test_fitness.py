import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flexcomm.fitness import (FlexParams, Partition, community_contribution,
                              flex, local_contribution, make_objective,
                              modularity)
from flexcomm.graph import Graph

from oracles import (all_labeled_graphs, brute_flex, brute_modularity,
                     random_graph, set_partitions)

TABLE_PARAMS = FlexParams(alpha=0.8, beta=0.3, gamma=2)


def test_flexparams_validation():
    with pytest.raises(ValueError):
        FlexParams(alpha=1.2, beta=0.3, gamma=2)
    with pytest.raises(ValueError):
        FlexParams(alpha=0.5, beta=-0.1, gamma=2)
    with pytest.raises(ValueError):
        FlexParams(alpha=0.5, beta=0.3, gamma=0.5)


def test_partition_from_communities_checks():
    with pytest.raises(ValueError):
        Partition.from_communities(3, [{0, 1}])  # node 2 uncovered
    with pytest.raises(ValueError):
        Partition.from_communities(3, [{0, 1}, {1, 2}])  # double assignment
    with pytest.raises(ValueError):
        Partition.from_communities(3, [{0, 1, 2}, set()])  # empty community


def test_partition_canonical_equality():
    a = Partition.from_communities(4, [{0, 1}, {2, 3}])
    b = Partition.from_communities(4, [{2, 3}, {0, 1}])
    assert a == b
    assert hash(a) == hash(b)
    assert a.communities[0] == frozenset({0, 1})


def test_local_contribution_complete_graph():
    k3 = Graph(3, [(0, 1), (1, 2), (0, 2)])
    lb = local_contribution(k3, 0, frozenset(range(3)), TABLE_PARAMS)
    assert (lb.tri_ratio, lb.nbr_ratio, lb.wedge_ratio) == (1.0, 1.0, 0.0)
    assert lb.lc == pytest.approx(1.0)


def test_local_contribution_singleton(bridge_graph):
    lb = local_contribution(bridge_graph, 2, frozenset({2}), TABLE_PARAMS)
    assert lb.lc == 0.0


def test_local_contribution_bridge_node(bridge_graph):
    lb = local_contribution(bridge_graph, 2, frozenset({0, 1, 2}), TABLE_PARAMS)
    assert lb.tri_ratio == 1.0
    assert lb.nbr_ratio == pytest.approx(2 / 3)
    assert lb.wedge_ratio == 0.0
    assert lb.lc == pytest.approx(0.9333333333333333)


def test_local_contribution_requires_membership(bridge_graph):
    with pytest.raises(ValueError):
        local_contribution(bridge_graph, 5, frozenset({0, 1, 2}), TABLE_PARAMS)


def test_community_contribution_bridge(bridge_graph):
    cc = community_contribution(bridge_graph, frozenset({0, 1, 2}), TABLE_PARAMS)
    assert cc == pytest.approx(1 + 1 + 0.9333333333333333 - 0.25)


def test_community_contribution_singleton(bridge_graph):
    cc = community_contribution(bridge_graph, frozenset({0}), TABLE_PARAMS)
    assert cc == pytest.approx(-(1 / 6) ** 2)


def test_community_contribution_whole_k3():
    k3 = Graph(3, [(0, 1), (1, 2), (0, 2)])
    assert community_contribution(k3, frozenset(range(3)), TABLE_PARAMS) == pytest.approx(2.0)


def test_community_contribution_matches_local_sum(karate):
    comm = frozenset(range(0, 17))
    total = sum(local_contribution(karate, i, comm, TABLE_PARAMS).lc for i in comm)
    expected = total - (len(comm) / karate.node_count) ** TABLE_PARAMS.gamma
    assert community_contribution(karate, comm, TABLE_PARAMS) == pytest.approx(expected, abs=1e-12)


def test_flex_bridge_partition(bridge_graph):
    p = Partition.from_communities(6, [{0, 1, 2}, {3, 4, 5}])
    assert flex(bridge_graph, p, TABLE_PARAMS) == pytest.approx(0.8944444444444445)


def test_flex_k3_single_community():
    k3 = Graph(3, [(0, 1), (1, 2), (0, 2)])
    p = Partition.from_communities(3, [{0, 1, 2}])
    assert flex(k3, p, TABLE_PARAMS) == pytest.approx(2 / 3)


def test_flex_all_singletons_value(bridge_graph):
    p = Partition.singletons(6)
    assert flex(bridge_graph, p, TABLE_PARAMS) == pytest.approx(-(1 / 6) ** 2)


def test_flex_merging_bridge_triangles_decreases(bridge_graph):
    split = Partition.from_communities(6, [{0, 1, 2}, {3, 4, 5}])
    merged = Partition.from_communities(6, [set(range(6))])
    assert flex(bridge_graph, merged, TABLE_PARAMS) < flex(bridge_graph, split, TABLE_PARAMS)


def test_flex_rejects_wrong_universe(bridge_graph):
    with pytest.raises(ValueError):
        flex(bridge_graph, Partition.singletons(5), TABLE_PARAMS)


def test_modularity_two_triangles():
    g = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    p = Partition.from_communities(6, [{0, 1, 2}, {3, 4, 5}])
    assert modularity(g, p) == pytest.approx(0.5)


def test_modularity_single_community(bridge_graph):
    p = Partition.from_communities(6, [set(range(6))])
    assert modularity(bridge_graph, p) == pytest.approx(0.0)


def test_modularity_requires_edges():
    with pytest.raises(ValueError):
        modularity(Graph(3, []), Partition.singletons(3))


def test_make_objective_selector(bridge_graph):
    p = Partition.from_communities(6, [{0, 1, 2}, {3, 4, 5}])
    assert make_objective("flex", bridge_graph, TABLE_PARAMS)(p) == pytest.approx(0.8944444444444445)
    assert make_objective("modularity", bridge_graph)(p) == pytest.approx(
        modularity(bridge_graph, p))
    with pytest.raises(ValueError):
        make_objective("flex", bridge_graph, None)
    with pytest.raises(ValueError):
        make_objective("density", bridge_graph)


# -- oracle equivalence -------------------------------------------------------

def _assert_flex_matches_oracle(edges, n, params):
    g = Graph(n, edges)
    for parts in set_partitions(list(range(n))):
        p = Partition.from_communities(n, [set(c) for c in parts])
        expected = brute_flex(edges, n, parts, params.alpha, params.beta, params.gamma)
        assert flex(g, p, params) == pytest.approx(expected, abs=1e-12)


def test_flex_oracle_exhaustive_small():
    # every labeled graph on 4 nodes, every set partition
    params = FlexParams(0.7, 0.4, 2)
    for edges in all_labeled_graphs(4):
        _assert_flex_matches_oracle(edges, 4, params)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10_000),
       st.floats(0.15, 0.85), st.floats(0.0, 1.0), st.floats(0.0, 2.0),
       st.floats(1.0, 4.0))
def test_flex_oracle_random_graphs(seed, density, alpha, beta, gamma):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 8))
    edges = random_graph(n, density, rng)
    params = FlexParams(alpha, beta, gamma)
    g = Graph(n, edges)
    for parts in set_partitions(list(range(n))):
        p = Partition.from_communities(n, [set(c) for c in parts])
        expected = brute_flex(edges, n, parts, alpha, beta, gamma)
        assert flex(g, p, params) == pytest.approx(expected, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.floats(0.2, 0.9))
def test_modularity_oracle_random_graphs(seed, density):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 9))
    edges = random_graph(n, density, rng)
    if not edges:
        return
    g = Graph(n, edges)
    labels = [int(x) for x in rng.integers(0, 3, size=n)]
    p = Partition(labels)
    communities = [sorted(c) for c in p.communities]
    assert modularity(g, p) == pytest.approx(
        brute_modularity(edges, n, communities), abs=1e-12)


def test_modularity_range_random():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(4, 10))
        edges = random_graph(n, 0.5, rng)
        if not edges:
            continue
        g = Graph(n, edges)
        p = Partition([int(x) for x in rng.integers(0, 4, size=n)])
        q = modularity(g, p)
        assert -0.5 <= q < 1.0
