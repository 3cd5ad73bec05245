"""Partition quality functions: the flexible score and the modularity baseline.

The flexible score blends, per node, the fraction of its triangles kept
inside its community, the fraction of its neighbors inside, and a penalty for
the open triangles centered on it there (neighbor pairs left unclosed);
community totals are damped by a size penalty and averaged over the graph.
Everything here is a pure function of immutable inputs.
"""

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from .graph import Graph, neighbor_fraction, triples_of_node_in_set

# Open-pair penalty split: the whole-graph share dominates so that merged
# communities inherit most of a node's wedge penalty; the in-community
# fraction breaks placement ties on sparse satellite nodes.
WEDGE_GLOBAL_WEIGHT = 0.75


@dataclass(frozen=True)
class FlexParams:
    """Weights of the flexible quality function.

    alpha in [0, 1] trades triangle ratio against neighbor ratio, beta >= 0
    scales the open-triangle penalty, gamma >= 1 sharpens the community-size
    penalty.
    """

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.beta < 0.0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.gamma < 1.0:
            raise ValueError(f"gamma must be >= 1, got {self.gamma}")


class Partition:
    """Disjoint assignment of every node to exactly one community.

    Community ids are dense and canonical: communities are numbered by their
    smallest member. Two partitions are equal iff they induce the same set of
    node sets.
    """

    __slots__ = ("node_count", "assignment", "communities")

    def __init__(self, assignment: Iterable[int]):
        labels = list(assignment)
        n = len(labels)
        if n == 0:
            raise ValueError("partition of an empty node set")
        groups: dict[int, list[int]] = {}
        for node, c in enumerate(labels):
            groups.setdefault(c, []).append(node)
        ordered = sorted(groups.values(), key=lambda ns: ns[0])
        canonical = [0] * n
        for cid, nodes in enumerate(ordered):
            for node in nodes:
                canonical[node] = cid
        object.__setattr__(self, "node_count", n)
        object.__setattr__(self, "assignment", tuple(canonical))
        object.__setattr__(self, "communities",
                           tuple(frozenset(nodes) for nodes in ordered))

    def __setattr__(self, name, value):
        raise AttributeError("Partition is immutable")

    @classmethod
    def from_communities(cls, node_count: int, communities: Iterable[Iterable[int]]) -> "Partition":
        assignment = [-1] * node_count
        for cid, comm in enumerate(communities):
            comm = set(comm)
            if not comm:
                raise ValueError("empty community")
            for node in comm:
                if not 0 <= node < node_count:
                    raise ValueError(f"node {node} out of range")
                if assignment[node] != -1:
                    raise ValueError(f"node {node} assigned to more than one community")
                assignment[node] = cid
        missing = [i for i, c in enumerate(assignment) if c == -1]
        if missing:
            raise ValueError(f"nodes not covered by any community: {missing[:5]}")
        return cls(assignment)

    @classmethod
    def singletons(cls, node_count: int) -> "Partition":
        return cls(range(node_count))

    def community_of(self, node: int) -> int:
        return self.assignment[node]

    def __len__(self) -> int:
        return len(self.communities)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return (self.node_count == other.node_count
                and self.assignment == other.assignment)

    def __hash__(self) -> int:
        return hash((self.node_count, self.assignment))

    def __repr__(self) -> str:
        return f"Partition({len(self.communities)} communities over {self.node_count} nodes)"


@dataclass(frozen=True)
class LocalBreakdown:
    """Per-node term of the flexible score, with its three ratios."""

    tri_ratio: float
    nbr_ratio: float
    wedge_ratio: float
    lc: float


def node_community_ratios(g: Graph, i: int, members: frozenset | set) -> tuple[float, float, float]:
    """(triangle ratio, neighbor ratio, wedge ratio) of node ``i`` within ``members``.

    Triples are centered at the node: each pair of its neighbors is either
    closed (a triangle) or open (a wedge). The triangle ratio is the share of
    i's whole-graph triangles kept inside ``members``. The wedge ratio blends
    the share of i's whole-graph open pairs that lie inside (weight 3/4,
    makes absorbing every wedge expensive) with the open fraction of its
    in-community pairs (weight 1/4, prices diluted neighborhoods). 0/0
    evaluates to 0 throughout, so leaves and isolated nodes contribute
    nothing.
    """
    nbrs_in = g.adjacency[i] & members
    pairs_in = len(nbrs_in) * (len(nbrs_in) - 1) // 2
    closed = sum(len(g.adjacency[j] & nbrs_in) for j in nbrs_in) // 2
    open_in = pairs_in - closed
    tri_total = int(g.triangles_total[i])
    d = g.degree(i)
    open_total = d * (d - 1) // 2 - tri_total
    tri_ratio = closed / tri_total if tri_total else 0.0
    global_share = open_in / open_total if open_total else 0.0
    local_fraction = open_in / pairs_in if pairs_in else 0.0
    wedge_ratio = WEDGE_GLOBAL_WEIGHT * global_share + (1.0 - WEDGE_GLOBAL_WEIGHT) * local_fraction
    return tri_ratio, neighbor_fraction(g, i, members), wedge_ratio


def local_contribution(g: Graph, i: int, community: frozenset | set,
                       params: FlexParams) -> LocalBreakdown:
    """Score of node ``i`` inside ``community``: alpha-blend of triangle and
    neighbor ratios minus the beta-weighted wedge ratio."""
    if i not in community:
        raise ValueError(f"node {i} is not a member of the community")
    tri, nbr, wedge = node_community_ratios(g, i, community)
    lc = params.alpha * tri + (1.0 - params.alpha) * nbr - params.beta * wedge
    return LocalBreakdown(tri_ratio=tri, nbr_ratio=nbr, wedge_ratio=wedge, lc=lc)


def community_contribution(g: Graph, community: frozenset | set,
                           params: FlexParams) -> float:
    """Sum of member contributions minus the (|c|/|V|)^gamma size penalty.

    Vectorized over the community's adjacency submatrix; agrees with summing
    ``local_contribution`` to float precision.
    """
    if not community:
        raise ValueError("empty community")
    idx = np.fromiter(sorted(community), dtype=np.intp)
    sub = g.dense_adjacency[np.ix_(idx, idx)]
    deg_in = sub.sum(axis=1)
    closed = (sub * (sub @ sub)).sum(axis=1) / 2.0
    pairs_in = deg_in * (deg_in - 1.0) / 2.0
    open_in = pairs_in - closed

    tri_total = g.triangles_total[idx].astype(float)
    deg = g.degrees[idx].astype(float)
    open_total = deg * (deg - 1.0) / 2.0 - tri_total
    tri_ratio = np.divide(closed, tri_total, out=np.zeros_like(closed),
                          where=tri_total > 0)
    nbr_ratio = np.divide(deg_in, deg, out=np.zeros_like(deg_in), where=deg > 0)
    global_share = np.divide(open_in, open_total, out=np.zeros_like(open_in),
                             where=open_total > 0)
    local_fraction = np.divide(open_in, pairs_in, out=np.zeros_like(open_in),
                               where=pairs_in > 0)
    wedge_ratio = (WEDGE_GLOBAL_WEIGHT * global_share
                   + (1.0 - WEDGE_GLOBAL_WEIGHT) * local_fraction)
    lc = (params.alpha * tri_ratio + (1.0 - params.alpha) * nbr_ratio
          - params.beta * wedge_ratio)
    penalty = (len(idx) / g.node_count) ** params.gamma
    return float(lc.sum() - penalty)


def flex(g: Graph, p: Partition, params: FlexParams) -> float:
    """Mean community contribution over the whole node set."""
    _check_partition(g, p)
    total = sum(community_contribution(g, c, params) for c in p.communities)
    return total / g.node_count


def modularity(g: Graph, p: Partition) -> float:
    """Newman-Girvan modularity: intra-edge fraction minus the random-graph
    expectation, summed over communities."""
    _check_partition(g, p)
    m = g.edge_count
    if m == 0:
        raise ValueError("modularity is undefined on an edgeless graph")
    k = len(p.communities)
    intra = np.zeros(k)
    assignment = p.assignment
    for u, v in g.edges:
        if assignment[u] == assignment[v]:
            intra[assignment[u]] += 1.0
    deg_sum = np.bincount(assignment, weights=g.degrees.astype(float), minlength=k)
    return float((intra / m - (deg_sum / (2.0 * m)) ** 2).sum())


def _check_partition(g: Graph, p: Partition):
    if p.node_count != g.node_count:
        raise ValueError(
            f"partition covers {p.node_count} nodes, graph has {g.node_count}")


def flex_objective(g: Graph, params: FlexParams) -> Callable[[Partition], float]:
    """Bind graph and weights into a partition-scoring callable."""
    return lambda p: flex(g, p, params)


def modularity_objective(g: Graph) -> Callable[[Partition], float]:
    return lambda p: modularity(g, p)


def make_objective(name: str, g: Graph, params: FlexParams | None = None
                   ) -> Callable[[Partition], float]:
    """Objective selector used by the bench harness and CLI."""
    if name == "flex":
        if params is None:
            raise ValueError("flex objective requires FlexParams")
        return flex_objective(g, params)
    if name == "modularity":
        return modularity_objective(g)
    raise ValueError(f"unknown objective {name!r}")
