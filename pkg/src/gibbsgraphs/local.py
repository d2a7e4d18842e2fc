"""Rooted neighbourhoods on the integers and their frequencies.

Vertices keep their integer labels, so two rooted graphs are identified only
when a translation carries one onto the other exactly. A truncated ball first
discards edges longer than ``l`` and then takes the radius-``k`` ball.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from numba import njit

from .graph import SegmentGraph
from .measures import chain_rng, log_edge_prob

__all__ = [
    "RootedPattern",
    "NeighborhoodQuery",
    "translate",
    "is_isomorphic",
    "ball",
    "ball_keys",
    "empirical_fraction",
    "window_pairs",
    "mu_truncated",
    "mu_ladder",
    "long_edge_count",
    "has_all_short_edges",
    "CensusEntry",
    "pattern_census",
    "census_csv",
    "MU_ENUMERATION_CAP",
]

MU_ENUMERATION_CAP = 24


@dataclass(frozen=True)
class RootedPattern:
    """Finite rooted graph with integer vertex labels.

    ``vertices`` and ``edges`` are stored sorted; edges are pairs ``(x, y)``
    with ``x < y`` and may have any length, including 1.
    """

    vertices: tuple
    edges: tuple
    root: int

    def __post_init__(self):
        verts = tuple(sorted({int(v) for v in self.vertices}))
        edges = set()
        for e in self.edges:
            x, y = sorted(int(v) for v in e)
            if x == y:
                raise ValueError(f"self-loop {e}")
            edges.add((x, y))
        edges = tuple(sorted(edges))
        root = int(self.root)
        vset = set(verts)
        if root not in vset:
            raise ValueError(f"root {root} is not a vertex")
        for x, y in edges:
            if x not in vset or y not in vset:
                raise ValueError(f"edge {(x, y)} leaves the vertex set")
        adj = {v: [] for v in verts}
        for x, y in edges:
            adj[x].append(y)
            adj[y].append(x)
        seen = {root}
        todo = [root]
        while todo:
            v = todo.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        if len(seen) != len(verts):
            raise ValueError("pattern is not connected from its root")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "root", root)

    def canonical(self) -> "RootedPattern":
        """The translate rooted at 0."""
        return translate(self, 0)

    def to_dict(self) -> dict:
        c = self.canonical()
        return {"root": 0, "vertices": list(c.vertices), "edges": [list(e) for e in c.edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def key(self) -> str:
        """Short stable hash of the canonical form."""
        return hashlib.sha1(self.to_json().encode()).hexdigest()[:12]

    @classmethod
    def from_dict(cls, data: dict) -> "RootedPattern":
        try:
            return cls(
                tuple(data["vertices"]),
                tuple(tuple(e) for e in data["edges"]),
                data["root"],
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed pattern {data!r}") from exc

    @classmethod
    def from_json(cls, text: str) -> "RootedPattern":
        return cls.from_dict(json.loads(text))

    @classmethod
    def path_ball(cls, radius: int = 1, root: int = 0) -> "RootedPattern":
        """Radius-``radius`` ball of the bare path around an interior root."""
        verts = range(root - radius, root + radius + 1)
        return cls(tuple(verts), tuple((v, v + 1) for v in verts[:-1]), root)


@dataclass(frozen=True)
class NeighborhoodQuery:
    """Ball radius ``k`` and optional edge-length cutoff ``l``."""

    k: int
    l: Optional[int] = None

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 0:
            raise ValueError(f"k must be an integer >= 0, got {self.k!r}")
        if self.l is not None and (isinstance(self.l, bool) or not isinstance(self.l, int) or self.l < 1):
            raise ValueError(f"l must be an integer >= 1, got {self.l!r}")


def translate(pattern: RootedPattern, new_root: int) -> RootedPattern:
    s = int(new_root) - pattern.root
    if s == 0:
        return pattern
    return RootedPattern(
        tuple(v + s for v in pattern.vertices),
        tuple((x + s, y + s) for x, y in pattern.edges),
        new_root,
    )


def is_isomorphic(a: RootedPattern, b: RootedPattern) -> bool:
    """True when translating ``a``'s root onto ``b``'s root gives ``b`` exactly."""
    return translate(a, b.root) == b


def _pruned_adjacency(g: SegmentGraph, l: Optional[int]) -> list[list[int]]:
    adj = [[] for _ in range(g.n + 1)]
    for x in range(1, g.n):
        adj[x].append(x + 1)
        adj[x + 1].append(x)
    for x, y in g.edges:
        if l is None or y - x <= l:
            adj[x].append(y)
            adj[y].append(x)
    return adj


def _ball_canonical(adj: list[list[int]], center: int, k: int) -> tuple:
    # (vertices, edges) of the radius-k ball, translated so that center -> 0
    depth = {center: 0}
    q = deque([center])
    while q:
        v = q.popleft()
        dv = depth[v]
        if dv == k:
            continue
        for w in adj[v]:
            if w not in depth:
                depth[w] = dv + 1
                q.append(w)
    verts = tuple(sorted(v - center for v in depth))
    edges = tuple(
        sorted((v - center, w - center) for v in depth for w in adj[v] if w > v and w in depth)
    )
    return verts, edges


def ball(g: SegmentGraph, center: int, query: NeighborhoodQuery, offset: int = 0) -> RootedPattern:
    """Truncated ball of ``g`` around ``center``.

    Vertex ``v`` of ``g`` carries the label ``v + offset``, which lets a
    segment graph stand in for a window ``[1 + offset, n + offset]`` of the
    integers. ``center`` is given as a label.
    """
    c = int(center) - offset
    if not 1 <= c <= g.n:
        raise ValueError(f"center {center} is outside [{1 + offset}, {g.n + offset}]")
    verts, edges = _ball_canonical(_pruned_adjacency(g, query.l), c, query.k)
    s = int(center)
    return RootedPattern(
        tuple(v + s for v in verts), tuple((x + s, y + s) for x, y in edges), s
    )


def ball_keys(g: SegmentGraph, query: NeighborhoodQuery) -> list[tuple]:
    """Canonical ``(vertices, edges)`` of the truncated ball at every vertex."""
    adj = _pruned_adjacency(g, query.l)
    return [_ball_canonical(adj, i, query.k) for i in range(1, g.n + 1)]


def _pattern_key(pattern: RootedPattern) -> tuple:
    c = pattern.canonical()
    return c.vertices, c.edges


def empirical_fraction(g: SegmentGraph, query: NeighborhoodQuery, pattern: RootedPattern) -> float:
    """Fraction of vertices whose truncated ball is a translate of ``pattern``."""
    target = _pattern_key(pattern)
    return sum(key == target for key in ball_keys(g, query)) / g.n


def long_edge_count(g: SegmentGraph, l: int) -> int:
    """Number of edges longer than ``l``."""
    return sum(1 for x, y in g.edges if y - x > l)


def has_all_short_edges(g: SegmentGraph, L: int) -> bool:
    """Whether every pair at distance ``<= L`` on the segment is an edge."""
    need = sum(max(g.n - d, 0) for d in range(2, int(L) + 1))
    return sum(1 for x, y in g.edges if y - x <= L) == need


# -- truncated-ball probabilities under the infinite reference measure --------


def window_pairs(k: int, l: int) -> list[tuple[int, int]]:
    """Pairs of length ``2..l`` inside ``[-k*l, k*l]``, ordered by length then left end."""
    r = k * l
    return [(x, x + d) for d in range(2, l + 1) for x in range(-r, r - d + 1)]


@njit(cache=True, nogil=True)
def _match_mass(masks, weights, px, py, n_win, center, k, want_v, want_e):
    # total weight of configurations whose k-ball at center has vertex set
    # want_v and long-edge set want_e (both bitmasks)
    m = px.shape[0]
    total = 0.0
    hits = 0
    adj = np.zeros(n_win, dtype=np.int64)
    for t in range(masks.shape[0]):
        cfg = masks[t]
        for v in range(n_win):
            a = 0
            if v > 0:
                a |= 1 << (v - 1)
            if v < n_win - 1:
                a |= 1 << (v + 1)
            adj[v] = a
        for j in range(m):
            if (cfg >> j) & 1:
                adj[px[j]] |= 1 << py[j]
                adj[py[j]] |= 1 << px[j]
        seen = 1 << center
        frontier = seen
        for _ in range(k):
            nxt = 0
            for v in range(n_win):
                if (frontier >> v) & 1:
                    nxt |= adj[v]
            frontier = nxt & ~seen
            seen |= frontier
            if frontier == 0:
                break
        if seen != want_v:
            continue
        inside = 0
        for j in range(m):
            if (seen >> px[j]) & 1 and (seen >> py[j]) & 1:
                inside |= 1 << j
        if (cfg & inside) == want_e:
            total += weights[t]
            hits += 1
    return total, hits


def _pattern_targets(pattern: RootedPattern, k: int, l: int, pairs):
    """Bitmask targets for the window kernel, or ``None`` if unmatchable."""
    c = pattern.canonical()
    r = k * l
    if any(abs(v) > r for v in c.vertices):
        return None
    vset = set(c.vertices)
    eset = set(c.edges)
    for v in c.vertices:
        if v + 1 in vset and (v, v + 1) not in eset:
            return None
    if any(y - x > l for x, y in eset):
        return None
    want_v = 0
    for v in c.vertices:
        want_v |= 1 << (v + r)
    index = {e: j for j, e in enumerate(pairs)}
    want_e = 0
    for e in eset:
        if e[1] - e[0] >= 2:
            want_e |= 1 << index[e]
    return want_v, want_e


def mu_truncated(
    gamma: float,
    query: NeighborhoodQuery,
    pattern: RootedPattern,
    mode: str = "exact",
    samples: int = 100_000,
    seed: int = 0,
) -> float:
    """Probability that the truncated ball at 0 of the integer-line graph is ``pattern``.

    Only edges of length ``<= l`` inside ``[-k*l, k*l]`` can influence the
    truncated ball, so the infinite graph is replaced by that window.
    ``mode="exact"`` sums over all window configurations (at most
    ``2**MU_ENUMERATION_CAP``); ``mode="monte_carlo"`` averages over
    ``samples`` independent window draws seeded by ``seed``.
    """
    if query.l is None:
        raise ValueError("mu_truncated needs a length cutoff l")
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    k, l = query.k, query.l
    pairs = window_pairs(k, l)
    m = len(pairs)
    targets = _pattern_targets(pattern, k, l, pairs)
    if mode == "exact" and m > MU_ENUMERATION_CAP:
        raise ValueError(
            f"window has {m} random pairs; exact mode is capped at {MU_ENUMERATION_CAP}"
        )
    if targets is None:
        return 0.0
    want_v, want_e = targets
    r = k * l
    px = np.array([x + r for x, _ in pairs], dtype=np.int64)
    py = np.array([y + r for _, y in pairs], dtype=np.int64)
    logp = np.array([log_edge_prob(y - x, gamma) for x, y in pairs])
    if mode == "exact":
        log1mp = np.log1p(-np.exp(logp))
        total = 0.0
        chunk = 1 << 16
        for start in range(0, 1 << m, chunk):
            masks = np.arange(start, min(start + chunk, 1 << m), dtype=np.int64)
            bits = (masks[:, None] >> np.arange(m)[None, :]) & 1
            w = np.exp(bits @ (logp - log1mp) + log1mp.sum())
            part, _ = _match_mass(masks, w, px, py, 2 * r + 1, r, k, want_v, want_e)
            total += part
        return float(total)
    if mode == "monte_carlo":
        if m > 62:
            raise ValueError(f"window has {m} random pairs; Monte Carlo mode supports at most 62")
        if samples < 1:
            raise ValueError("samples must be >= 1")
        rng = chain_rng(seed, 0)
        probs = np.exp(logp)
        hits = 0
        chunk = 1 << 16
        weights = np.ones(chunk)
        shifts = np.arange(m, dtype=np.int64)
        done = 0
        while done < samples:
            size = min(chunk, samples - done)
            bits = rng.random((size, m)) < probs[None, :]
            masks = (bits.astype(np.int64) << shifts[None, :]).sum(axis=1)
            _, h = _match_mass(masks, weights[:size], px, py, 2 * r + 1, r, k, want_v, want_e)
            hits += h
            done += size
        return hits / samples
    raise ValueError(f"unknown mode {mode!r}")


def mu_ladder(
    gamma: float, k: int, pattern: RootedPattern, ls: Sequence[int]
) -> list[tuple[int, float, float]]:
    """``(l, mu^l, mu^l - previous rung)`` for increasing cutoffs ``ls``.

    The increments shrinking towards 0 indicate convergence to the
    untruncated probability.
    """
    rows = []
    prev = math.nan
    for l in ls:
        mu = mu_truncated(gamma, NeighborhoodQuery(k, l), pattern)
        rows.append((l, mu, mu - prev))
        prev = mu
    return rows


# -- census ------------------------------------------------------------------


@dataclass(frozen=True)
class CensusEntry:
    pattern: RootedPattern
    mean: float
    stderr: float


def pattern_census(
    samples: Sequence[SegmentGraph], query: NeighborhoodQuery
) -> dict[RootedPattern, CensusEntry]:
    """Mean and standard error, across samples, of each ball shape's vertex fraction.

    Shapes missing from a sample contribute 0 for that sample. Keys are
    canonical patterns (root 0). The standard error is ``nan`` for a single
    sample.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("pattern_census needs at least one sample")
    per_sample = []
    for g in samples:
        counts = Counter(ball_keys(g, query))
        per_sample.append({key: c / g.n for key, c in counts.items()})
    keys = sorted(set().union(*per_sample))
    s = len(samples)
    out = {}
    for key in keys:
        vals = np.array([d.get(key, 0.0) for d in per_sample])
        se = float(vals.std(ddof=1) / math.sqrt(s)) if s > 1 else math.nan
        pat = RootedPattern(key[0], key[1], 0)
        out[pat] = CensusEntry(pat, float(vals.mean()), se)
    return out


def census_csv(census: dict[RootedPattern, CensusEntry]) -> str:
    """CSV with columns ``pattern_hash, pattern_json, mean, stderr``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["pattern_hash", "pattern_json", "mean", "stderr"])
    rows = sorted(census.values(), key=lambda e: (-e.mean, e.pattern.to_json()))
    for e in rows:
        w.writerow([e.pattern.key(), e.pattern.to_json(), repr(e.mean), repr(e.stderr)])
    return buf.getvalue()
