"""Independent reference computations used as test oracles.

Nothing here calls into the BFS kernels, the enumeration kernel or the
window kernel of the package.
"""

import itertools
import math

import numpy as np


def floyd_warshall(n, long_edges):
    """Dense distance matrix by triple-loop relaxation (0-based)."""
    inf = float("inf")
    d = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        d[i][i + 1] = d[i + 1][i] = 1
    for x, y in long_edges:
        d[x - 1][y - 1] = d[y - 1][x - 1] = 1
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == inf:
                continue
            di = d[i]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return d


def h_p_dense(n, long_edges, p):
    d = floyd_warshall(n, long_edges)
    vals = [d[i][j] for i in range(n) for j in range(i + 1, n)]
    if math.isinf(p):
        return float(max(vals))
    return (sum(v**p for v in vals) / len(vals)) ** (1.0 / p)


def reference_prob(n, long_edges, gamma):
    """Product-form probability of a graph under the reference measure."""
    prob = 1.0
    present = set(long_edges)
    for x in range(1, n + 1):
        for y in range(x + 2, n + 1):
            q = math.exp(-((y - x) ** gamma))
            prob *= q if (x, y) in present else 1.0 - q
    return prob


def brute_ball(vertices, edges, center, k):
    """Radius-k ball by repeated neighbourhood expansion, labels relative to center."""
    adj = {v: set() for v in vertices}
    for x, y in edges:
        adj[x].add(y)
        adj[y].add(x)
    reached = {center}
    for _ in range(k):
        reached = reached | {w for v in reached for w in adj[v]}
    es = sorted((x - center, y - center) for x, y in edges if x in reached and y in reached)
    return tuple(sorted(v - center for v in reached)), tuple(es)


def mu_product(gamma, k, l, verts, edges):
    """Ball probability on the integers via independence of the relevant pairs.

    ``verts``/``edges`` describe a pattern rooted at 0. The ball equals the
    pattern iff (a) the long edges among ``verts`` are exactly the pattern's,
    (b) path edges among ``verts`` are in the pattern, (c) every vertex at
    pattern distance < k has all its path neighbours in ``verts`` and no
    edge of length <= l leaving ``verts``, and (d) every pattern vertex is
    within distance k of 0 in the pattern.
    """
    vset = set(verts)
    eset = set(edges)
    adj = {v: set() for v in verts}
    for x, y in edges:
        adj[x].add(y)
        adj[y].add(x)
    dist = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    if set(dist) != vset or max(dist.values()) > k:
        return 0.0
    if any(y - x > l for x, y in eset):
        return 0.0
    for v in verts:
        if v + 1 in vset and (v, v + 1) not in eset:
            return 0.0
        if dist[v] < k and (v - 1 not in vset or v + 1 not in vset):
            return 0.0
    prob = 1.0
    seen = set()
    for v in verts:
        for d in range(2, l + 1):
            for w in (v - d, v + d):
                pair = (min(v, w), max(v, w))
                if pair in seen:
                    continue
                q = math.exp(-(d**gamma))
                if w in vset:
                    seen.add(pair)
                    prob *= q if pair in eset else 1.0 - q
                elif dist[v] < k:
                    seen.add(pair)
                    prob *= 1.0 - q
    return prob


def plain_metropolis(n, gamma, b, p, long_edge_log_weight, draws, start=frozenset()):
    """Textbook Metropolis over long-edge sets with the given random draws.

    ``draws`` is a sequence of ``(pair_index, log_u)``. The target log weight
    is recomputed from scratch for every proposal.
    """
    pairs = [(x, x + k) for k in range(2, n) for x in range(1, n - k + 1)]
    cur = set(start)
    w = long_edge_log_weight(frozenset(cur))
    out = []
    for idx, log_u in draws:
        prop = set(cur) ^ {pairs[idx]}
        wp = long_edge_log_weight(frozenset(prop))
        if log_u < wp - w:
            cur, w = prop, wp
        out.append(frozenset(cur))
    return out


def all_subsets(items):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def random_long_edges(rng, n, density):
    return [
        (x, y)
        for x in range(1, n + 1)
        for y in range(x + 2, n + 1)
        if rng.random() < density
    ]


def tv(p, q):
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())
