"""Immutable undirected simple graph with local triangle/triple counting.

All quality-function terms are ratios of counts produced here: triangles a
node closes inside a node set, open triples (wedges) it participates in, and
neighbor overlap with the set. Graphs are simple (no self-loops, no duplicate
or weighted edges) and nodes are dense integers in [0, node_count).
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

log = logging.getLogger(__name__)


class GraphParseError(ValueError):
    """Raised when an input file cannot be parsed; carries the line number."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class TripleCounts:
    """Counts of 3-node subgraphs containing one node within a node set.

    closed: triangles (3 edges) containing the node.
    open: connected triples (exactly 2 edges) containing the node in any
          position, center or endpoint.
    """

    closed: int
    open: int

    @property
    def total(self) -> int:
        return self.closed + self.open


class Graph:
    """Undirected simple graph, immutable after construction.

    Nodes are 0..node_count-1; ``node_labels`` keeps the original external
    tokens when the graph was loaded from a file. Neighbor sets, degrees and
    whole-graph triple statistics are precomputed so that read operations are
    cheap and safe to share across threads.
    """

    __slots__ = (
        "node_count",
        "edges",
        "adjacency",
        "node_labels",
        "_label_index",
        "_degrees",
        "_tri_total",
        "_participation_total",
        "_dense",
    )

    def __init__(self, node_count: int, edges: Iterable[tuple[int, int]],
                 node_labels: tuple[str, ...] | None = None):
        if node_count < 0:
            raise ValueError("node_count must be non-negative")
        adjacency = [set() for _ in range(node_count)]
        canonical = set()
        for u, v in edges:
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"edge ({u}, {v}) out of range for {node_count} nodes")
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            canonical.add((u, v) if u < v else (v, u))
        for u, v in canonical:
            adjacency[u].add(v)
            adjacency[v].add(u)
        if node_labels is not None:
            if len(node_labels) != node_count:
                raise ValueError("node_labels length must equal node_count")
            node_labels = tuple(node_labels)
        object.__setattr__(self, "node_count", node_count)
        object.__setattr__(self, "edges", frozenset(canonical))
        object.__setattr__(self, "adjacency", tuple(frozenset(s) for s in adjacency))
        object.__setattr__(self, "node_labels", node_labels)
        object.__setattr__(self, "_label_index",
                           None if node_labels is None
                           else {lab: i for i, lab in enumerate(node_labels)})
        object.__setattr__(self, "_degrees",
                           np.array([len(s) for s in adjacency], dtype=np.int64))
        object.__setattr__(self, "_tri_total", None)
        object.__setattr__(self, "_participation_total", None)
        object.__setattr__(self, "_dense", None)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    # -- basic queries ----------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, i: int) -> frozenset:
        return self.adjacency[i]

    def degree(self, i: int) -> int:
        return int(self._degrees[i])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def label_of(self, i: int) -> str:
        return self.node_labels[i] if self.node_labels else str(i)

    def index_of(self, label: str) -> int:
        if self._label_index is None:
            return int(label)
        return self._label_index[label]

    @property
    def degrees(self) -> np.ndarray:
        return self._degrees

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.node_count == other.node_count
                and self.edges == other.edges
                and self.node_labels == other.node_labels)

    def __hash__(self) -> int:
        return hash((self.node_count, self.edges, self.node_labels))

    def __repr__(self) -> str:
        return f"Graph(|V|={self.node_count}, |E|={self.edge_count})"

    # -- precomputed whole-graph statistics -------------------------------

    @property
    def triangles_total(self) -> np.ndarray:
        """Per-node count of triangles in the full graph."""
        if self._tri_total is None:
            self._compute_triple_totals()
        return self._tri_total

    @property
    def participation_total(self) -> np.ndarray:
        """Per-node count of connected triples (closed + open) in the full graph."""
        if self._participation_total is None:
            self._compute_triple_totals()
        return self._participation_total

    def _compute_triple_totals(self):
        n = self.node_count
        tri = np.zeros(n, dtype=np.int64)
        part = np.zeros(n, dtype=np.int64)
        adj = self.adjacency
        deg = self._degrees
        for i in range(n):
            nbrs = adj[i]
            common = sum(len(adj[j] & nbrs) for j in nbrs)
            closed = common // 2
            center_open = len(nbrs) * (len(nbrs) - 1) // 2 - closed
            # i as endpoint: j in N(i), k in N(j), k not i, and i-k not an edge
            endpoint_open = sum(int(deg[j]) - 1 - len(adj[j] & nbrs) for j in nbrs)
            tri[i] = closed
            part[i] = closed + center_open + endpoint_open
        tri.flags.writeable = False
        part.flags.writeable = False
        object.__setattr__(self, "_tri_total", tri)
        object.__setattr__(self, "_participation_total", part)

    @property
    def dense_adjacency(self) -> np.ndarray:
        """Read-only float64 adjacency matrix (built lazily)."""
        if self._dense is None:
            a = np.zeros((self.node_count, self.node_count))
            for u, v in self.edges:
                a[u, v] = 1.0
                a[v, u] = 1.0
            a.flags.writeable = False
            object.__setattr__(self, "_dense", a)
        return self._dense


# -- counting operations ---------------------------------------------------


def triples_of_node_in_set(g: Graph, i: int, members: frozenset | set) -> TripleCounts:
    """Count closed and open triples containing ``i`` with all nodes in ``members``.

    A closed triple is a triangle; an open triple is three distinct nodes
    spanned by exactly two edges, containing ``i`` either as the center or as
    an endpoint.
    """
    if i not in members:
        raise ValueError(f"node {i} is not in the given set")
    adj = g.adjacency
    nbrs_in = adj[i] & members
    common_total = sum(len(adj[j] & nbrs_in) for j in nbrs_in)
    closed = common_total // 2
    center_open = len(nbrs_in) * (len(nbrs_in) - 1) // 2 - closed
    endpoint_open = 0
    for j in nbrs_in:
        inside = adj[j] & members
        endpoint_open += len(inside) - 1 - len(inside & adj[i])
    return TripleCounts(closed=closed, open=center_open + endpoint_open)


def neighbor_fraction(g: Graph, i: int, members: frozenset | set) -> float:
    """Fraction of i's neighbors inside ``members``; 0 for isolated nodes."""
    deg = g.degree(i)
    if deg == 0:
        return 0.0
    return len(g.adjacency[i] & members) / deg


def clustering_coefficient(g: Graph, i: int) -> float:
    """Triangles at ``i`` over all neighbor pairs; 0 when degree < 2."""
    deg = g.degree(i)
    if deg < 2:
        return 0.0
    return int(g.triangles_total[i]) / math.comb(deg, 2)


# -- loading ----------------------------------------------------------------

COMMENT_PREFIXES = ("#", "%")


def _labels_sort_key(labels):
    if all(_is_int(t) for t in labels):
        return sorted(labels, key=int)
    return sorted(labels)


def _is_int(token: str) -> bool:
    try:
        int(token)
        return True
    except ValueError:
        return False


def _build_from_token_pairs(pairs: list[tuple[str, str]]) -> Graph:
    tokens = set()
    for a, b in pairs:
        tokens.add(a)
        tokens.add(b)
    ordered = _labels_sort_key(tokens)
    index = {t: k for k, t in enumerate(ordered)}
    edges = set()
    self_loops = 0
    duplicates = 0
    for a, b in pairs:
        u, v = index[a], index[b]
        if u == v:
            self_loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in edges:
            duplicates += 1
        else:
            edges.add(key)
    if self_loops or duplicates:
        log.warning("dropped %d self-loop(s) and %d duplicate edge(s) on load",
                    self_loops, duplicates)
    return Graph(len(ordered), edges, node_labels=tuple(ordered))


def load_edge_list(source: str | TextIO) -> Graph:
    """Parse whitespace-separated edge-list text into a Graph.

    One edge per line, two tokens; lines starting with '#' or '%' are
    ignored. Node indices are assigned by sorted token order (numeric when
    every token is an integer), so the result does not depend on line order.
    """
    text = source if isinstance(source, str) else source.read()
    pairs = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIXES):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphParseError(
                f"expected 2 tokens, found {len(tokens)}: {line!r}", line_no)
        pairs.append((tokens[0], tokens[1]))
    return _build_from_token_pairs(pairs)


def load_gml(source: str | TextIO) -> Graph:
    """Read the node/edge subset of a GML file.

    Understands ``node [ id ... label ... ]`` and ``edge [ source ... target ... ]``
    blocks, which covers the standard public community-detection datasets.
    Directed graphs are rejected.
    """
    text = source if isinstance(source, str) else source.read()
    tokens = _tokenize_gml(text)
    ids: list[int] = []
    labels: dict[int, str] = {}
    raw_edges: list[tuple[int, int]] = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "directed" and i + 1 < len(tokens) and tokens[i + 1] == "1":
            raise GraphParseError("directed graphs are not supported")
        if tok in ("node", "edge") and i + 1 < len(tokens) and tokens[i + 1] == "[":
            block, i = _read_gml_block(tokens, i + 2)
            if tok == "node":
                if "id" not in block:
                    raise GraphParseError("node block without id")
                nid = int(block["id"])
                ids.append(nid)
                if "label" in block:
                    labels[nid] = block["label"]
            else:
                if "source" not in block or "target" not in block:
                    raise GraphParseError("edge block without source/target")
                raw_edges.append((int(block["source"]), int(block["target"])))
            continue
        i += 1
    if not ids:
        ids = sorted({n for e in raw_edges for n in e})
    ordered = sorted(set(ids))
    index = {nid: k for k, nid in enumerate(ordered)}
    use_labels = len(labels) == len(ordered) and len(set(labels.values())) == len(ordered)
    node_labels = tuple(labels[nid] if use_labels else str(nid) for nid in ordered)
    edges = set()
    self_loops = duplicates = 0
    for s, t in raw_edges:
        if s not in index or t not in index:
            raise GraphParseError(f"edge endpoint {s if s not in index else t} has no node block")
        u, v = index[s], index[t]
        if u == v:
            self_loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in edges:
            duplicates += 1
        else:
            edges.add(key)
    if self_loops or duplicates:
        log.warning("dropped %d self-loop(s) and %d duplicate edge(s) on load",
                    self_loops, duplicates)
    return Graph(len(ordered), edges, node_labels=node_labels)


def _tokenize_gml(text: str) -> list[str]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise GraphParseError("unterminated string in GML input")
            tokens.append(text[i + 1:j])
            i = j + 1
        elif c in "[]":
            tokens.append(c)
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "[]":
                j += 1
            tokens.append(text[i:j])
            i = j
    return tokens


def _read_gml_block(tokens: list[str], start: int) -> tuple[dict, int]:
    block = {}
    i = start
    while i < len(tokens) and tokens[i] != "]":
        key = tokens[i]
        if i + 1 < len(tokens) and tokens[i + 1] == "[":
            _, i = _read_gml_block(tokens, i + 2)  # nested block, ignored
            continue
        if i + 1 >= len(tokens):
            raise GraphParseError(f"dangling key {key!r} in GML input")
        block.setdefault(key, tokens[i + 1])
        i += 2
    if i >= len(tokens):
        raise GraphParseError("unterminated block in GML input")
    return block, i + 1
