"""Promotion of a disjoint partition to an overlapping cover.

A node that contributes little to its home community on either the triangle
ratio or the neighbor ratio is treated as alpha-sensitive and is added to
every other community holding more than a threshold share of its neighbors.
Home memberships are never removed, and all tests run against the original
partition (snapshot semantics), so the result is independent of node order.
"""

from dataclasses import dataclass
from typing import Iterable, Mapping

from .fitness import Partition, node_community_ratios
from .graph import Graph, neighbor_fraction


@dataclass(frozen=True)
class OverlapThresholds:
    """Flagging and adoption thresholds, all in [0, 1].

    A node is flagged when its triangle ratio falls below ``thr_tri`` or its
    neighbor ratio below ``thr_nbr``; a flagged node joins any foreign
    community whose neighbor share exceeds ``thr_shared``.
    """

    thr_tri: float
    thr_nbr: float
    thr_shared: float

    def __post_init__(self):
        for name in ("thr_tri", "thr_nbr", "thr_shared"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")


class Cover:
    """Assignment of every node to one home community plus optional extras.

    Restricting to home memberships reproduces the source partition exactly.
    """

    __slots__ = ("node_count", "home", "memberships", "communities")

    def __init__(self, home: Iterable[int], extra: Mapping[int, Iterable[int]] | None = None):
        base = Partition(home)
        members = [set() for _ in range(len(base.communities))]
        membership_sets = []
        for node in range(base.node_count):
            cids = {base.assignment[node]}
            if extra and node in extra:
                for cid in extra[node]:
                    if not 0 <= cid < len(base.communities):
                        raise ValueError(f"community id {cid} out of range")
                    cids.add(cid)
            membership_sets.append(frozenset(cids))
            for cid in cids:
                members[cid].add(node)
        object.__setattr__(self, "node_count", base.node_count)
        object.__setattr__(self, "home", base.assignment)
        object.__setattr__(self, "memberships", tuple(membership_sets))
        object.__setattr__(self, "communities", tuple(frozenset(m) for m in members))

    def __setattr__(self, name, value):
        raise AttributeError("Cover is immutable")

    @classmethod
    def from_partition(cls, p: Partition) -> "Cover":
        return cls(p.assignment)

    @classmethod
    def from_memberships(cls, node_count: int,
                         communities: Iterable[Iterable[int]]) -> "Cover":
        """Build from community node lists; a node's home is the first
        community that lists it."""
        comms = [set(c) for c in communities]
        home = [-1] * node_count
        extra: dict[int, set[int]] = {}
        for cid, comm in enumerate(comms):
            if not comm:
                raise ValueError("empty community")
            for node in comm:
                if not 0 <= node < node_count:
                    raise ValueError(f"node {node} out of range")
                if home[node] == -1:
                    home[node] = cid
                else:
                    extra.setdefault(node, set()).add(cid)
        missing = [i for i, c in enumerate(home) if c == -1]
        if missing:
            raise ValueError(f"nodes not covered by any community: {missing[:5]}")
        # re-express extras in the canonical ids produced by Partition
        base = Partition(home)
        remap = {}
        for old_cid, comm in enumerate(comms):
            first = min(n for n in comm if home[n] == old_cid)
            remap[old_cid] = base.assignment[first]
        return cls(home, {n: {remap[c] for c in cs} for n, cs in extra.items()})

    def to_partition(self) -> Partition:
        return Partition(self.home)

    @property
    def overlap_nodes(self) -> tuple[int, ...]:
        return tuple(i for i, m in enumerate(self.memberships) if len(m) > 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cover):
            return NotImplemented
        return (self.node_count == other.node_count
                and self.home == other.home
                and self.memberships == other.memberships)

    def __hash__(self) -> int:
        return hash((self.node_count, self.home, self.memberships))

    def __repr__(self) -> str:
        return (f"Cover({len(self.communities)} communities, "
                f"{len(self.overlap_nodes)} overlapping of {self.node_count} nodes)")


def find_overlaps(g: Graph, p: Partition, th: OverlapThresholds) -> Cover:
    """Flag alpha-sensitive nodes and add them to neighbor-sharing communities.

    Flagging uses strict ``<`` against ``thr_tri``/``thr_nbr``, adoption
    strict ``>`` against ``thr_shared``. All ratios are evaluated against the
    input partition's communities, so additions made during the pass never
    influence later decisions.
    """
    if p.node_count != g.node_count:
        raise ValueError("partition does not match the graph")
    extra: dict[int, set[int]] = {}
    for i in range(g.node_count):
        home_id = p.assignment[i]
        tri, nbr, _ = node_community_ratios(g, i, p.communities[home_id])
        if tri < th.thr_tri or nbr < th.thr_nbr:
            for cid, comm in enumerate(p.communities):
                if cid == home_id:
                    continue
                if neighbor_fraction(g, i, comm) > th.thr_shared:
                    extra.setdefault(i, set()).add(cid)
    return Cover(p.assignment, extra)
