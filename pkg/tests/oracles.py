"""Independent reference implementations used only as test oracles.

Everything here is written as straight-line enumeration over node tuples,
deliberately sharing no code with the package: triangles and wedges come from
brute-force iteration, modularity from the per-pair null-model sum, and set
partitions from a recursive generator.
"""

import itertools
import math


def brute_local_contribution(edges, n, i, community, alpha, beta):
    """Per-node score via exhaustive neighbor-pair classification."""
    adj = {u: set() for u in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    tri_in = tri_tot = open_in = open_tot = pairs_in = 0
    for j, k in itertools.combinations(sorted(adj[i]), 2):
        closed = k in adj[j]
        if closed:
            tri_tot += 1
        else:
            open_tot += 1
        if j in community and k in community:
            pairs_in += 1
            if closed:
                tri_in += 1
            else:
                open_in += 1
    tri_ratio = tri_in / tri_tot if tri_tot else 0.0
    nbr_ratio = len(adj[i] & set(community)) / len(adj[i]) if adj[i] else 0.0
    global_share = open_in / open_tot if open_tot else 0.0
    local_fraction = open_in / pairs_in if pairs_in else 0.0
    wedge = 0.75 * global_share + 0.25 * local_fraction
    return alpha * tri_ratio + (1 - alpha) * nbr_ratio - beta * wedge


def brute_flex(edges, n, communities, alpha, beta, gamma):
    total = 0.0
    for comm in communities:
        comm = set(comm)
        s = sum(brute_local_contribution(edges, n, i, comm, alpha, beta)
                for i in comm)
        total += s - (len(comm) / n) ** gamma
    return total / n


def brute_modularity(edges, n, communities):
    """Pairwise null-model form: (1/2m) sum_ij (A_ij - d_i d_j / 2m) delta."""
    m = len(edges)
    adj = [[0] * n for _ in range(n)]
    deg = [0] * n
    for u, v in edges:
        adj[u][v] = adj[v][u] = 1
        deg[u] += 1
        deg[v] += 1
    label = {}
    for cid, comm in enumerate(communities):
        for node in comm:
            label[node] = cid
    q = 0.0
    for i in range(n):
        for j in range(n):
            if label[i] == label[j]:
                q += adj[i][j] - deg[i] * deg[j] / (2 * m)
    return q / (2 * m)


def brute_triples(edges, n, i, members):
    """Closed/open triples containing i, any position, via full enumeration."""
    adj = {u: set() for u in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    closed = opened = 0
    for trip in itertools.combinations(sorted(members), 3):
        if i not in trip:
            continue
        present = sum(1 for a, b in itertools.combinations(trip, 2) if b in adj[a])
        if present == 3:
            closed += 1
        elif present == 2:
            opened += 1
    return closed, opened


def set_partitions(items):
    """All set partitions of a list (Bell-number many)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in set_partitions(rest):
        for k in range(len(smaller)):
            yield smaller[:k] + [smaller[k] + [first]] + smaller[k + 1:]
        yield smaller + [[first]]


def all_labeled_graphs(n):
    """Every labeled simple graph on n nodes as an edge list."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield [pairs[b] for b in range(len(pairs)) if mask >> b & 1]


def random_graph(n, p, rng):
    return [(u, v) for u, v in itertools.combinations(range(n), 2)
            if rng.random() < p]


def nmi_from_labels(a_labels, b_labels):
    """Plain confusion-table NMI with arithmetic normalization."""
    n = len(a_labels)
    table = {}
    for x, y in zip(a_labels, b_labels):
        table[(x, y)] = table.get((x, y), 0) + 1
    row = {}
    col = {}
    for (x, y), c in table.items():
        row[x] = row.get(x, 0) + c
        col[y] = col.get(y, 0) + c
    h_a = -sum(c / n * math.log(c / n) for c in row.values())
    h_b = -sum(c / n * math.log(c / n) for c in col.values())
    if h_a == 0.0 and h_b == 0.0:
        return 1.0
    if h_a == 0.0 or h_b == 0.0:
        return 0.0
    mi = sum(c / n * math.log(n * c / (row[x] * col[y]))
             for (x, y), c in table.items())
    return 2 * mi / (h_a + h_b)
