"""Readers and writers for the toolkit's file formats.

Community files hold one community per line as whitespace-separated node
labels; a node appearing on several lines is an overlap. Comment lines start
with '#', which is also where the run manifest is embedded for provenance.
"""

import json
from dataclasses import asdict, dataclass, field
from typing import Iterable

from .fitness import Partition
from .graph import Graph
from .overlap import Cover


@dataclass
class RunManifest:
    """Everything needed to reproduce an emitted artifact."""

    command: str
    argv: list[str] = field(default_factory=list)
    inputs: dict = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)
    seed: int | None = None
    outputs: list[str] = field(default_factory=list)
    tool_version: str = "0.1.0"

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        return cls(**json.loads(text))


MANIFEST_PREFIX = "# manifest: "


def manifest_comment(manifest: RunManifest | None) -> str:
    return MANIFEST_PREFIX + manifest.to_json() + "\n" if manifest else ""


def extract_manifest(text: str) -> RunManifest | None:
    for line in text.splitlines():
        line = line.strip()
        for prefix in (MANIFEST_PREFIX, "// manifest: "):
            if line.startswith(prefix):
                return RunManifest.from_json(line[len(prefix):])
    return None


# -- community files ---------------------------------------------------------

def format_communities(communities: Iterable[Iterable[str]],
                       manifest: RunManifest | None = None) -> str:
    lines = [" ".join(comm) for comm in communities]
    return manifest_comment(manifest) + "\n".join(lines) + "\n"


def cover_to_text(cover: Cover, labels: Iterable[str] | None = None,
                  manifest: RunManifest | None = None) -> str:
    labels = list(labels) if labels else [str(i) for i in range(cover.node_count)]
    return format_communities(
        ([labels[i] for i in sorted(comm)] for comm in cover.communities),
        manifest)


def partition_to_text(p: Partition, labels: Iterable[str] | None = None,
                      manifest: RunManifest | None = None) -> str:
    labels = list(labels) if labels else [str(i) for i in range(p.node_count)]
    return format_communities(
        ([labels[i] for i in sorted(comm)] for comm in p.communities),
        manifest)


def parse_label_communities(text: str) -> list[list[str]]:
    """Community lines as raw label lists, comments skipped."""
    communities = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(("#", "%")):
            continue
        communities.append(line.split())
    if not communities:
        raise ValueError("no communities found in file")
    return communities


def read_cover(text: str) -> tuple[Cover, list[str]]:
    """Parse a community file into a Cover over its own sorted label universe.

    Returns the cover and the label list (index -> label).
    """
    raw = parse_label_communities(text)
    labels = sorted({tok for comm in raw for tok in comm},
                    key=lambda t: (0, int(t)) if t.isdigit() else (1, t))
    index = {t: k for k, t in enumerate(labels)}
    communities = [[index[tok] for tok in comm] for comm in raw]
    return Cover.from_memberships(len(labels), communities), labels


def cover_for_graph(text: str, g: Graph) -> Cover:
    """Parse a community file against an existing graph's label universe."""
    raw = parse_label_communities(text)
    seen = {tok for comm in raw for tok in comm}
    expected = {g.label_of(i) for i in range(g.node_count)}
    if seen != expected:
        missing = sorted(expected - seen)[:5]
        extra = sorted(seen - expected)[:5]
        raise ValueError(
            f"community file does not cover the graph's nodes "
            f"(missing {missing}, unknown {extra})")
    communities = [[g.index_of(tok) for tok in comm] for comm in raw]
    return Cover.from_memberships(g.node_count, communities)


# -- edge lists ---------------------------------------------------------------

def edge_list_to_text(g: Graph, manifest: RunManifest | None = None) -> str:
    lines = []
    for u, v in sorted(g.edges):
        lines.append(f"{g.label_of(u)} {g.label_of(v)}")
    return manifest_comment(manifest) + "\n".join(lines) + "\n"


# -- DOT export ---------------------------------------------------------------

def cover_to_dot(g: Graph, cover: Cover,
                 manifest: RunManifest | None = None) -> str:
    """Graphviz rendering: one fill color per community, overlap nodes
    double-circled (peripheries=2)."""
    if cover.node_count != g.node_count:
        raise ValueError("cover does not match the graph")
    k = len(cover.communities)
    colors = [f"{i / max(k, 1):.3f} 0.45 0.95" for i in range(k)]
    lines = ["graph communities {"]
    if manifest:
        lines.append(f"  // manifest: {manifest.to_json()}")
    lines.append("  node [style=filled];")
    overlap = set(cover.overlap_nodes)
    for i in range(g.node_count):
        attrs = [f'fillcolor="{colors[cover.home[i]]}"']
        if i in overlap:
            attrs.append("peripheries=2")
        lines.append(f'  "{g.label_of(i)}" [{", ".join(attrs)}];')
    for u, v in sorted(g.edges):
        lines.append(f'  "{g.label_of(u)}" -- "{g.label_of(v)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
