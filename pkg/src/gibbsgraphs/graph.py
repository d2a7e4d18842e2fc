"""Graphs on an integer segment and their distance functionals.

A :class:`SegmentGraph` lives on the vertex set ``{1, ..., n}``. Every
nearest-neighbour pair ``{x, x+1}`` is an edge by construction and is never
stored; only the "long" edges (length at least 2) are data. Distances are
hop counts, computed by breadth-first search from every source.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np
from numba import njit

__all__ = [
    "SegmentGraph",
    "EdgeKey",
    "check_p",
    "distance",
    "all_pairs_distances",
    "distance_histogram",
    "h_p",
    "h_p_from_histogram",
]

EdgeKey = tuple[int, int]


def check_p(p: float) -> float:
    """Validate a norm exponent: any real ``p >= 1`` or ``math.inf``."""
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError(f"p must be >= 1 or inf, got {p}")
    return p


@dataclass(frozen=True)
class SegmentGraph:
    """Path on ``[1, n]`` plus a set of long edges.

    Parameters
    ----------
    n : int
        Number of vertices, ``n >= 1``.
    edges : frozenset of (int, int)
        Long edges ``(x, y)`` with ``1 <= x`` and ``y - x >= 2`` and
        ``y <= n``. Any iterable of pairs is accepted and normalised; pairs
        given in either orientation are fine.
    """

    n: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        n = self.n
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
            raise TypeError(f"n must be an integer, got {type(n).__name__}")
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        object.__setattr__(self, "n", int(n))
        norm = set()
        for e in self.edges:
            x, y = (int(v) for v in e)
            if x > y:
                x, y = y, x
            if x < 1 or y > n:
                raise ValueError(f"edge {e} has an endpoint outside [1, {n}]")
            if y - x < 2:
                raise ValueError(
                    f"edge {e} has length {y - x}; only edges of length >= 2 are stored"
                )
            norm.add((x, y))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def path(cls, n: int) -> "SegmentGraph":
        return cls(n)

    @classmethod
    def complete(cls, n: int) -> "SegmentGraph":
        return cls(n, all_long_pairs(n))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "SegmentGraph":
        """Build from any edge list; nearest-neighbour pairs are dropped."""
        kept = []
        for e in edges:
            x, y = sorted(int(v) for v in e)
            if x == y:
                raise ValueError(f"self-loop {e} is not allowed")
            if y - x >= 2:
                kept.append((x, y))
            elif x < 1 or y > n:
                raise ValueError(f"edge {e} has an endpoint outside [1, {n}]")
        return cls(n, frozenset(kept))

    def sorted_edges(self) -> list[EdgeKey]:
        return sorted(self.edges)

    def has_edge(self, x: int, y: int) -> bool:
        if x > y:
            x, y = y, x
        if y - x == 1:
            return 1 <= x and y <= self.n
        return (x, y) in self.edges

    def with_edge(self, x: int, y: int) -> "SegmentGraph":
        return SegmentGraph(self.n, self.edges | {(min(x, y), max(x, y))})

    def without_edge(self, x: int, y: int) -> "SegmentGraph":
        return SegmentGraph(self.n, self.edges - {(min(x, y), max(x, y))})

    def all_edges(self) -> Iterator[EdgeKey]:
        """Every edge, nearest-neighbour ones included, in sorted order."""
        yield from sorted([(x, x + 1) for x in range(1, self.n)] + list(self.edges))

    def adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR adjacency ``(indptr, indices)`` with 0-based vertex ids."""
        return _csr(self.n, self.edges)

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "SegmentGraph":
        if not isinstance(data, dict) or set(data) != {"n", "edges"}:
            raise ValueError('graph JSON must be an object with keys "n" and "edges"')
        n = data["n"]
        if isinstance(n, bool) or not isinstance(n, int):
            raise ValueError(f'"n" must be an integer, got {n!r}')
        edges = []
        for e in data["edges"]:
            if (
                not isinstance(e, list)
                or len(e) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in e)
            ):
                raise ValueError(f"malformed edge {e!r}")
            if e[0] >= e[1]:
                raise ValueError(f"edge {e} must be listed as [x, y] with x < y")
            edges.append(tuple(e))
        if edges != sorted(edges):
            raise ValueError("edges must be sorted lexicographically")
        if len(set(edges)) != len(edges):
            raise ValueError("duplicate edges")
        return cls(n, frozenset(edges))

    @classmethod
    def from_json(cls, text: str) -> "SegmentGraph":
        return cls.from_dict(json.loads(text))


def all_long_pairs(n: int) -> list[EdgeKey]:
    """All pairs ``(x, y)`` with ``y - x >= 2``, ordered by length then ``x``."""
    return [(x, x + k) for k in range(2, n) for x in range(1, n - k + 1)]


def _csr(n: int, edges) -> tuple[np.ndarray, np.ndarray]:
    deg = np.zeros(n, dtype=np.int64)
    if n > 1:
        deg[:-1] += 1
        deg[1:] += 1
    if edges:
        e = np.array(sorted(edges), dtype=np.int64) - 1
        np.add.at(deg, e[:, 0], 1)
        np.add.at(deg, e[:, 1], 1)
    else:
        e = np.empty((0, 2), dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    src = np.concatenate([np.arange(n - 1), np.arange(1, n), e[:, 0], e[:, 1]])
    dst = np.concatenate([np.arange(1, n), np.arange(n - 1), e[:, 1], e[:, 0]])
    order = np.lexsort((dst, src))
    return indptr, dst[order].astype(np.int64)


@njit(cache=True, nogil=True)
def _bfs(indptr, indices, source, dist, queue):
    n = dist.shape[0]
    for v in range(n):
        dist[v] = -1
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        v = queue[head]
        head += 1
        dv = dist[v] + 1
        for j in range(indptr[v], indptr[v + 1]):
            w = indices[j]
            if dist[w] < 0:
                dist[w] = dv
                queue[tail] = w
                tail += 1


@njit(cache=True, nogil=True)
def _apsp(indptr, indices, n):
    out = np.zeros((n, n), dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    dist = np.empty(n, dtype=np.int64)
    for s in range(n):
        _bfs(indptr, indices, s, dist, queue)
        for v in range(n):
            out[s, v] = dist[v]
    return out


@njit(cache=True, nogil=True)
def _pair_histogram(indptr, indices, n):
    # hist[d] = number of pairs x < y at distance d
    hist = np.zeros(max(n, 1), dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    dist = np.empty(n, dtype=np.int64)
    for s in range(n - 1):
        _bfs(indptr, indices, s, dist, queue)
        for v in range(s + 1, n):
            hist[dist[v]] += 1
    return hist


def _check_vertex(g: SegmentGraph, v: int) -> int:
    if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 1 <= v <= g.n:
        raise ValueError(f"vertex {v!r} outside [1, {g.n}]")
    return int(v)


def distance(g: SegmentGraph, x: int, y: int) -> int:
    """Hop distance between ``x`` and ``y`` in ``g``."""
    x = _check_vertex(g, x)
    y = _check_vertex(g, y)
    indptr, indices = g.adjacency()
    dist = np.empty(g.n, dtype=np.int64)
    _bfs(indptr, indices, x - 1, dist, np.empty(g.n, dtype=np.int64))
    return int(dist[y - 1])


def all_pairs_distances(g: SegmentGraph) -> np.ndarray:
    """Dense ``n x n`` distance matrix; entry ``[x-1, y-1]`` is ``d(x, y)``."""
    indptr, indices = g.adjacency()
    return _apsp(indptr, indices, g.n)


def distance_histogram(g: SegmentGraph) -> np.ndarray:
    """Counts of unordered pairs by distance: ``hist[d]`` pairs at distance ``d``."""
    indptr, indices = g.adjacency()
    return _pair_histogram(indptr, indices, g.n)


def h_p_from_histogram(hist: np.ndarray, p: float) -> float:
    """Power mean of pair distances given their histogram.

    The mean is taken as ``m * (mean((d/m)**p))**(1/p)`` with ``m`` the
    largest distance so that large ``p`` cannot overflow.
    """
    hist = np.asarray(hist)
    total = int(hist.sum())
    if total == 0:
        return 0.0
    d = np.nonzero(hist)[0]
    m = float(d[-1])
    if math.isinf(p):
        return m
    if p == 1.0:
        return float((d * hist[d]).sum()) / total
    scaled = float(np.dot(hist[d], (d / m) ** p)) / total
    return m * scaled ** (1.0 / p)


def h_p(g: SegmentGraph, p: float) -> float:
    """ℓ^p mean of pairwise distances over ``x < y``; ``p = inf`` is the diameter.

    Graphs with a single vertex have no pairs and get ``0``.
    """
    p = check_p(p)
    if g.n < 2:
        return 0.0
    return h_p_from_histogram(distance_histogram(g), p)
