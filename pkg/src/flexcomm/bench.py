"""Synthetic benchmark graphs and experiment batches.

The generator plants communities with a controlled mixing fraction (share of
edges leaving a node's communities), explicit overlap nodes that split their
internal edges across multiple memberships, and a triadic-closure bias that
pushes mean local clustering toward a target. The experiment runner scores
optimizer output against the planted truth and aggregates repetition means in
rows shaped like the benchmark tables (fit, nmi, nmi_over, n_comm, n_over,
time_s).
"""

import hashlib
import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .fitness import FlexParams, make_objective
from .graph import Graph, clustering_coefficient
from .metrics import nmi_cover, nmi_disjoint
from .optimizer import OptimizerConfig, run
from .overlap import Cover, OverlapThresholds, find_overlaps


@dataclass(frozen=True)
class GeneratorConfig:
    """Recipe for one planted-partition benchmark graph."""

    n_nodes: int
    avg_degree: float = 10.0
    max_degree: int = 15
    max_communities: int = 10
    mixing: float = 0.1
    n_overlap_nodes: int = 3
    avg_memberships: float = 2.0
    target_clustering: float = 0.7
    rng_seed: int = 0

    def __post_init__(self):
        if self.n_nodes < 2:
            raise ValueError("need at least 2 nodes")
        if not self.avg_degree <= self.max_degree < self.n_nodes:
            raise ValueError("need avg_degree <= max_degree < n_nodes")
        if not 0.0 <= self.mixing <= 1.0:
            raise ValueError("mixing must be in [0, 1]")
        if self.max_communities < 1:
            raise ValueError("max_communities must be >= 1")
        if not 0.0 <= self.target_clustering <= 1.0:
            raise ValueError("target_clustering must be in [0, 1]")
        if self.n_overlap_nodes < 0:
            raise ValueError("n_overlap_nodes must be >= 0")
        if self.n_overlap_nodes > 0 and self.avg_memberships < 2.0:
            raise ValueError("overlap nodes need avg_memberships >= 2")


def _community_sizes(cfg: GeneratorConfig, rng: np.random.Generator) -> list[int]:
    """Sizes drawn uniformly from the feasible band, adjusted to sum to n.

    The lower bound is raised to fit the internal-degree target: a community
    must hold one more node than the internal edges each member wants.
    """
    n, k_max = cfg.n_nodes, cfg.max_communities
    feasible_floor = math.ceil((1.0 - cfg.mixing) * cfg.avg_degree) + 1
    lo = max(2, n // (2 * k_max), feasible_floor)
    hi = max(lo, (2 * n) // k_max)
    if lo > n:
        raise ValueError(
            f"infeasible config: minimum community size {lo} exceeds {n} nodes")
    sizes: list[int] = []
    while sum(sizes) < n and len(sizes) < k_max:
        sizes.append(int(rng.integers(lo, hi + 1)))
    excess = sum(sizes) - n
    if excess > 0:
        if sizes[-1] - excess >= lo or len(sizes) == 1:
            sizes[-1] -= excess
        else:
            deficit = n - sum(sizes[:-1])
            sizes.pop()
            for j in range(deficit):
                sizes[j % len(sizes)] += 1
    elif excess < 0:
        for j in range(-excess):
            sizes[j % len(sizes)] += 1
    assert sum(sizes) == n
    return sizes


def generate(cfg: GeneratorConfig) -> tuple[Graph, Cover]:
    """Build a benchmark graph and its planted ground-truth cover."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.rng_seed)))
    n = cfg.n_nodes
    sizes = _community_sizes(cfg, rng)
    k = len(sizes)

    home = np.empty(n, dtype=np.int64)
    members: list[list[int]] = []
    start = 0
    for cid, size in enumerate(sizes):
        nodes = list(range(start, start + size))
        members.append(nodes)
        home[nodes] = cid
        start += size

    # overlap nodes spread over distinct communities, extra memberships random
    memberships = [{int(home[i])} for i in range(n)]
    extra_counts = _membership_counts(cfg, rng)
    overlap_nodes: list[int] = []
    for j, extra_needed in enumerate(extra_counts):
        cid = j % k
        pool = [v for v in members[cid] if v not in overlap_nodes]
        node = int(pool[rng.integers(len(pool))])
        overlap_nodes.append(node)
        others = [c for c in range(k) if c != cid]
        rng.shuffle(others)
        for oc in others[:extra_needed]:
            memberships[node].add(oc)

    full_members = [sorted(set(members[c])
                           | {i for i in range(n) if c in memberships[i]})
                    for c in range(k)]

    degree_target = _degree_targets(cfg, rng)
    # overlap nodes sit at the average so one membership's share stays a
    # clear minority of either community
    for o in overlap_nodes:
        degree_target[o] = int(round(cfg.avg_degree))
    degree = np.zeros(n, dtype=np.int64)
    edges: set[tuple[int, int]] = set()

    def add_edge(u: int, v: int) -> bool:
        if u == v:
            return False
        key = (u, v) if u < v else (v, u)
        if key in edges or degree[u] >= cfg.max_degree or degree[v] >= cfg.max_degree:
            return False
        edges.add(key)
        degree[u] += 1
        degree[v] += 1
        return True

    adj_in: dict[int, dict[int, set[int]]] = {c: {i: set() for i in full_members[c]}
                                              for c in range(k)}

    for c in range(k):
        _fill_community(cfg, rng, c, full_members[c], memberships, home,
                        degree_target, add_edge, adj_in[c])

    # background noise avoids community pairs already bridged by an overlap
    # node: their only cross edges are the bridge's own, so the bridge stays
    # a neighbor-share relation rather than a triangle-rich seam
    bridged = {frozenset(pair)
               for i in overlap_nodes
               for pair in _pairs(memberships[i])}
    _fill_external(cfg, rng, memberships, degree_target, degree, add_edge, k,
                   bridged)

    g = Graph(n, edges)
    truth = Cover(home.tolist(),
                  {i: memberships[i] - {int(home[i])}
                   for i in overlap_nodes if len(memberships[i]) > 1})
    return g, truth


def _membership_counts(cfg: GeneratorConfig, rng: np.random.Generator) -> list[int]:
    """Extra memberships per overlap node so totals average avg_memberships."""
    if cfg.n_overlap_nodes == 0:
        return []
    base = int(cfg.avg_memberships)
    bonus = int(round((cfg.avg_memberships - base) * cfg.n_overlap_nodes))
    extras = [base - 1 + (1 if j < bonus else 0) for j in range(cfg.n_overlap_nodes)]
    return extras


def _degree_targets(cfg: GeneratorConfig, rng: np.random.Generator) -> np.ndarray:
    lo = max(2, int(round(2 * cfg.avg_degree)) - cfg.max_degree)
    hi = cfg.max_degree
    if lo > hi:
        lo = hi
    return rng.integers(lo, hi + 1, size=cfg.n_nodes)


def _fill_community(cfg, rng, cid, nodes, memberships, home, degree_target,
                    add_edge, adj):
    """Spanning tree for connectivity, then triadic-closure-biased edges up to
    the community's internal budget.

    Overlap nodes spend a split share of their internal budget here and stay
    out of triangle closure away from home: a secondary membership is a
    neighbor-share relation, so the node's triangle mass remains with its home
    community and the planted partition stays the high score.
    """
    budget = {i: (1.0 - cfg.mixing) * degree_target[i] / len(memberships[i])
              for i in nodes}
    target_edges = int(round(sum(budget.values()) / 2.0))
    order = list(nodes)
    rng.shuffle(order)
    added = 0
    for j in range(1, len(order)):
        anchor = order[int(rng.integers(j))]
        if add_edge(order[j], anchor):
            adj[order[j]].add(anchor)
            adj[anchor].add(order[j])
            added += 1
    # visiting overlap nodes attach to a near-independent set: neighbor share
    # without triangle mass, so their home keeps the transitivity signal
    for o in nodes:
        if not (len(memberships[o]) > 1 and home[o] != cid):
            continue
        while len(adj[o]) < budget[o] and added < target_edges:
            pool = [v for v in nodes if v != o and v not in adj[o]
                    and len(memberships[v]) == 1]
            if not pool:
                break
            overlap_links = [len(adj[v] & adj[o]) for v in pool]
            floor = min(overlap_links)
            tied = [v for v, w in zip(pool, overlap_links) if w == floor]
            v = tied[int(rng.integers(len(tied)))]
            if add_edge(o, v):
                adj[o].add(v)
                adj[v].add(o)
                added += 1
            else:
                break
    attempts = 0
    max_attempts = 40 * max(target_edges, 1)
    nodes_arr = list(nodes)
    # cap multi-membership nodes near their per-community budget so they
    # genuinely split their neighborhoods across memberships
    over_budget = lambda x: (len(memberships[x]) > 1
                             and len(adj[x]) >= budget[x] + 1.5)
    visiting = lambda x: len(memberships[x]) > 1 and home[x] != cid
    while added < target_edges and attempts < max_attempts:
        attempts += 1
        u = v = -1
        if rng.random() < cfg.target_clustering:
            center = nodes_arr[int(rng.integers(len(nodes_arr)))]
            if visiting(center):
                continue
            local = sorted(x for x in adj[center] if not visiting(x))
            if len(local) >= 2:
                pick = rng.choice(len(local), size=2, replace=False)
                u, v = local[pick[0]], local[pick[1]]
        if u < 0:
            u, v = _budget_weighted_pair(rng, nodes_arr, budget, adj)
        if u < 0 or v < 0 or u == v or over_budget(u) or over_budget(v):
            continue
        if add_edge(u, v):
            adj[u].add(v)
            adj[v].add(u)
            added += 1


def _budget_weighted_pair(rng, nodes, budget, adj):
    weights = np.array([max(budget[i] - len(adj[i]), 0.01) for i in nodes])
    probs = weights / weights.sum()
    u = int(rng.choice(nodes, p=probs))
    others = [i for i in nodes if i != u and i not in adj[u]]
    if not others:
        return -1, -1
    w2 = np.array([max(budget[i] - len(adj[i]), 0.01) for i in others])
    v = int(rng.choice(others, p=w2 / w2.sum()))
    return u, v


def _ring_share(mixing: float) -> float:
    """How strongly external edges concentrate on neighboring communities.

    Light noise spreads uniformly; heavy noise bundles cross-edges between
    community pairs, which is what makes noisy benchmarks adversarial for
    edge-count objectives (the bundles look like merged communities but close
    no triangles). The ramp starts above the light-noise regime.
    """
    return min(0.95, max(0.05, 4.5 * mixing - 0.4))


def _pairs(values):
    values = sorted(values)
    return [(a, b) for i, a in enumerate(values) for b in values[i + 1:]]


def _fill_external(cfg, rng, memberships, degree_target, degree, add_edge,
                   n_comms, bridged=frozenset()):
    n = len(memberships)
    target = int(round(cfg.mixing * float(np.sum(degree_target)) / 2.0))
    share = _ring_share(cfg.mixing)
    added = 0
    attempts = 0
    max_attempts = 60 * max(target, 1)
    while added < target and attempts < max_attempts:
        attempts += 1
        deficit = np.maximum(degree_target - degree, 0.01)
        u = int(rng.choice(n, p=deficit / deficit.sum()))
        partners = {(c + 1) % n_comms for c in memberships[u]}
        partners |= {(c - 1) % n_comms for c in memberships[u]}
        candidates = [v for v in range(n)
                      if not memberships[u] & memberships[v]
                      and not any(frozenset((cu, cv)) in bridged
                                  for cu in memberships[u]
                                  for cv in memberships[v])]
        if not candidates:
            continue
        w = np.maximum(degree_target[candidates] - degree[candidates], 0.01)
        if n_comms > 2:
            ring = np.array([bool(memberships[v] & partners) for v in candidates])
            boost = np.where(ring, share, 1.0 - share)
            w = w * boost
        v = int(rng.choice(candidates, p=w / w.sum()))
        if add_edge(u, v):
            added += 1


def measured_mixing(g: Graph, truth: Cover) -> float:
    """Fraction of edges whose endpoints share no ground-truth community."""
    if g.edge_count == 0:
        return 0.0
    cut = sum(1 for u, v in g.edges
              if not truth.memberships[u] & truth.memberships[v])
    return cut / g.edge_count


def mean_local_clustering(g: Graph) -> float:
    return float(np.mean([clustering_coefficient(g, i)
                          for i in range(g.node_count)]))


# -- experiments --------------------------------------------------------------

def derive_seed(master_seed: int, index: int) -> int:
    """Stable per-repetition stream seed."""
    digest = hashlib.sha256(f"{master_seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big") % (2 ** 63)


@dataclass(frozen=True)
class RunRecord:
    """One optimizer repetition scored against the ground truth."""

    repetition: int
    seed: int
    fit: float
    nmi: float
    nmi_over: float
    n_communities: int
    n_overlapping: int
    time_seconds: float


@dataclass
class ExperimentResult:
    """Means over repetitions, raw records retained."""

    fit: float
    nmi: float
    nmi_over: float
    n_communities: float
    n_overlapping: float
    time_seconds: float
    records: list[RunRecord] = field(default_factory=list)


def run_experiment(g: Graph, truth: Cover, objective: str,
                   flex_params: FlexParams, thresholds: OverlapThresholds,
                   opt: OptimizerConfig, repetitions: int) -> ExperimentResult:
    """Repeat optimization with derived seeds, promote overlaps on each best
    solution, and score against the truth cover and its disjoint projection."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    objective_fn = make_objective(objective, g,
                                  flex_params if objective == "flex" else None)
    truth_partition = truth.to_partition()
    records = []
    for rep in range(repetitions):
        seed = derive_seed(opt.rng_seed, rep)
        started = time.perf_counter()
        result = run(g, objective_fn, replace(opt, rng_seed=seed))
        elapsed = time.perf_counter() - started
        cover = find_overlaps(g, result.best_partition, thresholds)
        records.append(RunRecord(
            repetition=rep,
            seed=seed,
            fit=result.best.fitness,
            nmi=nmi_disjoint(result.best_partition, truth_partition),
            nmi_over=nmi_cover(cover, truth),
            n_communities=len(result.best_partition.communities),
            n_overlapping=len(cover.overlap_nodes),
            time_seconds=elapsed,
        ))
    mean = lambda key: float(np.mean([getattr(r, key) for r in records]))
    return ExperimentResult(
        fit=mean("fit"),
        nmi=mean("nmi"),
        nmi_over=mean("nmi_over"),
        n_communities=mean("n_communities"),
        n_overlapping=mean("n_overlapping"),
        time_seconds=mean("time_seconds"),
        records=records,
    )


# -- batch experiments --------------------------------------------------------

CSV_HEADER = "dataset,objective,repetition,seed,fit,nmi,nmi_over,n_comm,n_over,time_s"


def run_batch(manifest: dict, load_dataset) -> tuple[dict, list[str]]:
    """Execute a batch manifest: datasets x objectives x repetitions.

    ``load_dataset`` maps each dataset entry to (graph, truth cover,
    FlexParams, OverlapThresholds); file resolution stays with the caller.
    Returns the nested results document and CSV rows (one per repetition).
    """
    repetitions = int(manifest.get("repetitions", 1))
    objectives = manifest.get("objectives", ["flex", "modularity"])
    opt = OptimizerConfig(**manifest.get("optimizer", {}))
    results: dict = {"repetitions": repetitions, "objectives": objectives,
                     "datasets": []}
    rows = [CSV_HEADER]
    for ds_index, entry in enumerate(manifest.get("datasets", [])):
        name = entry.get("name", f"dataset{ds_index}")
        g, truth, flex_params, thresholds = load_dataset(entry)
        ds_out = {"name": name, "config": entry, "objectives": {}}
        for objective in objectives:
            seed = derive_seed(opt.rng_seed, hash((ds_index, objective)) & 0xFFFF)
            result = run_experiment(g, truth, objective, flex_params,
                                    thresholds, replace(opt, rng_seed=seed),
                                    repetitions)
            ds_out["objectives"][objective] = {
                "fit": result.fit, "nmi": result.nmi, "nmi_over": result.nmi_over,
                "n_comm": result.n_communities, "n_over": result.n_overlapping,
                "time_s": result.time_seconds,
                "records": [vars(r) for r in result.records],
            }
            for r in result.records:
                rows.append(f"{name},{objective},{r.repetition},{r.seed},"
                            f"{r.fit:.6f},{r.nmi:.6f},{r.nmi_over:.6f},"
                            f"{r.n_communities},{r.n_overlapping},{r.time_seconds:.3f}")
        results["datasets"].append(ds_out)
    return results, rows
