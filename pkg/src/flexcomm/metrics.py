"""Agreement scores between detected and reference groupings.

``nmi_disjoint`` is the usual normalized mutual information over the
community confusion table. ``nmi_cover`` handles overlapping memberships by
treating each community as a binary node-membership variable and scoring how
much information one cover lacks about the other.
"""

import math
from dataclasses import dataclass

from .fitness import Partition
from .overlap import Cover


@dataclass(frozen=True)
class ConfusionTable:
    """Joint membership counts between two partitions of the same nodes."""

    joint: tuple[tuple[int, ...], ...]  # rows: communities of a, cols: of b
    row_marginals: tuple[int, ...]
    col_marginals: tuple[int, ...]
    n: int

    @classmethod
    def from_partitions(cls, a: Partition, b: Partition) -> "ConfusionTable":
        if a.node_count != b.node_count:
            raise ValueError("partitions cover different node universes")
        rows = len(a.communities)
        cols = len(b.communities)
        joint = [[0] * cols for _ in range(rows)]
        for node in range(a.node_count):
            joint[a.assignment[node]][b.assignment[node]] += 1
        return cls(
            joint=tuple(tuple(r) for r in joint),
            row_marginals=tuple(sum(r) for r in joint),
            col_marginals=tuple(sum(joint[i][j] for i in range(rows)) for j in range(cols)),
            n=a.node_count,
        )


def _entropy(counts, n: int) -> float:
    h = 0.0
    for c in counts:
        if c > 0:
            p = c / n
            h -= p * math.log(p)
    return h


def nmi_disjoint(a: Partition, b: Partition) -> float:
    """Normalized mutual information 2I/(H(A)+H(B)) with natural logs.

    Returns 1 when both partitions are trivial (single community), 0 when
    exactly one of them is.
    """
    table = ConfusionTable.from_partitions(a, b)
    n = table.n
    h_a = _entropy(table.row_marginals, n)
    h_b = _entropy(table.col_marginals, n)
    if h_a == 0.0 and h_b == 0.0:
        return 1.0
    if h_a == 0.0 or h_b == 0.0:
        return 0.0
    mi = 0.0
    for k, row in enumerate(table.joint):
        n_k = table.row_marginals[k]
        for l, n_kl in enumerate(row):
            if n_kl > 0:
                mi += (n_kl / n) * math.log(n * n_kl / (n_k * table.col_marginals[l]))
    return _clamp01(2.0 * mi / (h_a + h_b))


# -- overlapping covers ------------------------------------------------------

COVER_NMI_VARIANTS = ("lack", "max")


def nmi_cover(a: Cover, b: Cover, variant: str = "lack") -> float:
    """Normalized mutual information between covers.

    Each community is viewed as a binary membership vector; a community's
    entropy left unexplained by its best match on the other side is averaged
    and normalized. ``variant`` picks the final normalization: "lack" (the
    lack-of-information form, default) uses the mean of the two conditional
    terms, "max" the worse of the two.
    """
    if variant not in COVER_NMI_VARIANTS:
        raise ValueError(f"variant must be one of {COVER_NMI_VARIANTS}")
    if a.node_count != b.node_count:
        raise ValueError("covers span different node universes")
    if not a.communities or not b.communities:
        raise ValueError("covers must be non-empty")
    n = a.node_count
    h_a_given_b = _mean_conditional_entropy(a.communities, b.communities, n)
    h_b_given_a = _mean_conditional_entropy(b.communities, a.communities, n)
    if variant == "max":
        return _clamp01(1.0 - max(h_a_given_b, h_b_given_a))
    return _clamp01(1.0 - 0.5 * (h_a_given_b + h_b_given_a))


def _h(p: float) -> float:
    return -p * math.log(p) if p > 0.0 else 0.0


def _binary_entropy(size: int, n: int) -> float:
    return _h(size / n) + _h((n - size) / n)


def _mean_conditional_entropy(xs, ys, n: int) -> float:
    """Mean over communities in xs of H(X_k | Y) / H(X_k)."""
    total = 0.0
    for x in xs:
        h_x = _binary_entropy(len(x), n)
        if h_x == 0.0:
            # a community covering nothing or everything carries no information
            continue
        best = None
        for y in ys:
            h_cond = _conditional_pair_entropy(x, y, n)
            if h_cond is not None and (best is None or h_cond < best):
                best = h_cond
        total += (best if best is not None else h_x) / h_x
    return total / len(xs)


def _conditional_pair_entropy(x: frozenset, y: frozenset, n: int) -> float | None:
    """H(X|Y) over the 2x2 membership table, or None when the pair fails the
    reliability constraint (complement-like matches are rejected)."""
    n11 = len(x & y)
    n10 = len(x) - n11
    n01 = len(y) - n11
    n00 = n - n11 - n10 - n01
    p11, p10, p01, p00 = n11 / n, n10 / n, n01 / n, n00 / n
    if _h(p11) + _h(p00) < _h(p01) + _h(p10):
        return None
    joint = _h(p11) + _h(p10) + _h(p01) + _h(p00)
    return joint - _binary_entropy(len(y), n)


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))
