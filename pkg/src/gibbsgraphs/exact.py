"""Exhaustive enumeration of the Gibbs measure for small ``n``.

Graph ``i`` of an enumeration has long edge ``pairs[j]`` iff bit ``j`` of
``i`` is set, with ``pairs`` from :func:`gibbsgraphs.graph.all_long_pairs`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np
from numba import njit

from .graph import SegmentGraph, all_long_pairs
from .measures import ModelParams, log_edge_prob

__all__ = [
    "ENUMERATION_CAP",
    "EnumerationReport",
    "enumerate_measure",
    "exact_event_probability",
    "exact_expectation",
    "total_variation",
    "logsumexp",
]

ENUMERATION_CAP = 24


@njit(cache=True, nogil=True)
def _histograms(n, px, py, n_graphs):
    # hist[i, d]: pairs at distance d in graph i; adjacency kept as bitmasks
    m = px.shape[0]
    out = np.zeros((n_graphs, n), dtype=np.int32)
    for i in range(n_graphs):
        adj = np.zeros(n, dtype=np.int64)
        for v in range(n - 1):
            adj[v] |= 1 << (v + 1)
            adj[v + 1] |= 1 << v
        for j in range(m):
            if (i >> j) & 1:
                adj[px[j]] |= 1 << py[j]
                adj[py[j]] |= 1 << px[j]
        full = (1 << n) - 1
        for s in range(n - 1):
            seen = 1 << s
            frontier = seen
            d = 0
            while seen != full:
                d += 1
                nxt = 0
                for v in range(n):
                    if (frontier >> v) & 1:
                        nxt |= adj[v]
                frontier = nxt & ~seen
                seen |= frontier
                # count newly reached vertices above s
                f = frontier >> (s + 1)
                c = 0
                while f:
                    f &= f - 1
                    c += 1
                out[i, d] += c
    return out


def logsumexp(a: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    top = a.max()
    return float(top + np.log(np.exp(a - top).sum()))


@dataclass
class EnumerationReport:
    """Exact Gibbs probabilities of every graph on ``[1, n]``.

    Attributes
    ----------
    params : ModelParams
    log_z : float
        Log of the sum of unnormalised weights (the reference measure is
        normalised, so ``log_z`` is the log partition function).
    pairs : list of (int, int)
        Bit order of graph indices.
    log_weights, probs, hp : ndarray
        Per-graph unnormalised log weight, probability and ``h_p``.
    """

    params: ModelParams
    log_z: float
    pairs: list
    log_weights: np.ndarray
    probs: np.ndarray
    hp: np.ndarray

    def __len__(self) -> int:
        return len(self.probs)

    def graph(self, index: int) -> SegmentGraph:
        edges = frozenset(self.pairs[j] for j in range(len(self.pairs)) if index >> j & 1)
        return SegmentGraph(self.params.n, edges)

    def index_of(self, g: SegmentGraph) -> int:
        pos = {e: j for j, e in enumerate(self.pairs)}
        return sum(1 << pos[e] for e in g.edges)

    def entries(self) -> Iterator[tuple[SegmentGraph, float, float]]:
        for i in range(len(self)):
            yield self.graph(i), float(self.log_weights[i]), float(self.probs[i])

    def to_dict(self, include_table: bool = False, results: Optional[dict] = None) -> dict:
        out = {"params": self.params.to_dict(), "log_z": self.log_z, "n_graphs": len(self)}
        if results:
            out["results"] = dict(results)
        if include_table:
            out["table"] = [
                {"edges": [list(e) for e in g.sorted_edges()], "log_weight": lw, "prob": pr}
                for g, lw, pr in self.entries()
            ]
        return out

    def to_json(self, include_table: bool = False, results: Optional[dict] = None) -> str:
        return json.dumps(self.to_dict(include_table, results), indent=2)


def enumerate_measure(params: ModelParams) -> EnumerationReport:
    """Enumerate all ``2**m`` graphs and normalise their Gibbs weights."""
    pairs = all_long_pairs(params.n)
    m = len(pairs)
    if m > ENUMERATION_CAP:
        raise ValueError(
            f"n={params.n} has m={m} random pairs; exact enumeration is capped at "
            f"m <= {ENUMERATION_CAP} (n <= 8). Use MCMC for larger n."
        )
    n_graphs = 1 << m
    px = np.array([x - 1 for x, _ in pairs], dtype=np.int64)
    py = np.array([y - 1 for _, y in pairs], dtype=np.int64)
    hists = _histograms(params.n, px, py, n_graphs)
    top = (hists > 0).cumsum(axis=1).argmax(axis=1).astype(float)
    hp = top if math.isinf(params.p) else _power_means(hists, top, params.p)

    logp = np.array([log_edge_prob(y - x, params.gamma) for x, y in pairs])
    log1mp = np.log1p(-np.exp(logp))
    bits = (np.arange(n_graphs)[:, None] >> np.arange(m)[None, :]) & 1
    log_ref = bits @ (logp - log1mp) + log1mp.sum()

    logw = -params.inverse_temperature * hp + log_ref
    log_z = logsumexp(logw)
    probs = np.exp(logw - log_z)
    return EnumerationReport(params, log_z, pairs, logw, probs, hp)


def _power_means(hists: np.ndarray, top: np.ndarray, p: float) -> np.ndarray:
    # row-wise version of graph.h_p_from_histogram
    d = np.arange(hists.shape[1], dtype=float)
    total = hists.sum(axis=1)
    if p == 1.0:
        return (hists @ d) / total
    scaled = (hists * (d[None, :] / top[:, None]) ** p).sum(axis=1) / total
    return top * scaled ** (1.0 / p)


def exact_event_probability(
    report: EnumerationReport, predicate: Callable[[SegmentGraph], bool]
) -> float:
    """Probability of the set of graphs on which ``predicate`` holds."""
    return float(sum(pr for g, _, pr in report.entries() if predicate(g)))


def exact_expectation(report: EnumerationReport, f: Callable[[SegmentGraph], float]) -> float:
    return float(sum(f(g) * pr for g, _, pr in report.entries()))


def total_variation(report: EnumerationReport, counts: dict) -> float:
    """TV distance between ``report`` and empirical counts keyed by edge frozensets."""
    total = sum(counts.values())
    if total == 0:
        raise ValueError("no samples")
    emp = np.zeros(len(report))
    for edges, c in counts.items():
        emp[report.index_of(SegmentGraph(report.params.n, edges))] += c / total
    return 0.5 * float(np.abs(emp - report.probs).sum())
