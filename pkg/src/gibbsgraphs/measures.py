"""Reference measure and Gibbs-reweighted measure on segment graphs.

Under the reference measure every pair ``{x, y}`` with ``|x - y| >= 2`` is an
edge independently with probability ``exp(-|x - y|**gamma)``. The Gibbs
measure multiplies this by ``exp(-n**b * h_p(g))``; it is sampled with a
single-edge-flip Metropolis chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .graph import SegmentGraph, all_long_pairs, check_p, h_p

__all__ = [
    "ModelParams",
    "ChainState",
    "edge_prob",
    "log_edge_prob",
    "log_edge_odds",
    "chain_rng",
    "sample_reference",
    "log_reference_weight",
    "log_gibbs_weight_unnormalized",
    "subgraph_log_prob",
    "init_chain",
    "flip_log_ratio",
    "mcmc_step",
    "iter_chain",
    "run_chain",
    "default_schedule",
    "transition_matrix",
]


@dataclass(frozen=True)
class ModelParams:
    """Parameters ``(n, gamma, b, p)`` of the Gibbs measure."""

    n: int
    gamma: float
    b: float = 0.0
    p: float = math.inf

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise TypeError("n must be an integer")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not self.gamma > 0 or math.isinf(self.gamma):
            raise ValueError(f"gamma must be a positive finite number, got {self.gamma}")
        if not math.isfinite(self.b):
            raise ValueError(f"b must be finite, got {self.b}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "p", check_p(self.p))

    @property
    def n_pairs(self) -> int:
        """Number of pairs whose presence is random, ``C(n, 2) - (n - 1)``."""
        return (self.n - 1) * (self.n - 2) // 2

    @property
    def inverse_temperature(self) -> float:
        return float(self.n) ** self.b

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "gamma": self.gamma,
            "b": self.b,
            "p": "inf" if math.isinf(self.p) else self.p,
        }


def _length(x: int, y: int) -> int:
    k = abs(int(x) - int(y))
    if k < 2:
        raise ValueError(f"pair ({x}, {y}) has length {k}; edge probabilities need length >= 2")
    return k


def log_edge_prob(length: int, gamma: float) -> float:
    return -float(length) ** gamma


def log_edge_odds(length: int, gamma: float) -> float:
    """``log p - log(1 - p)`` for a pair of the given length."""
    lp = log_edge_prob(length, gamma)
    return lp - math.log1p(-math.exp(lp))


def edge_prob(x: int, y: int, gamma: float) -> float:
    """Probability that the pair ``{x, y}`` is an edge under the reference measure."""
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    return math.exp(log_edge_prob(_length(x, y), gamma))


def sample_reference(params: ModelParams, rng: np.random.Generator) -> SegmentGraph:
    """Draw one graph from the reference (independent-edge) measure.

    For each length ``k`` the number of present pairs is binomial and their
    left endpoints are a uniform subset, which is the same law as independent
    coin flips but touches only the pairs that turn out present.
    """
    n = params.n
    if n < 3:
        return SegmentGraph(n)
    lengths = np.arange(2, n)
    probs = np.exp(-(lengths.astype(float) ** params.gamma))
    counts = rng.binomial(n - lengths, probs)
    edges = []
    for k, c in zip(lengths[counts > 0], counts[counts > 0]):
        starts = rng.choice(n - k, size=c, replace=False) + 1
        edges.extend((int(x), int(x + k)) for x in starts)
    return SegmentGraph(n, frozenset(edges))


def log_reference_weight(g: SegmentGraph, gamma: float) -> float:
    """Exact log-probability of ``g`` under the reference measure."""
    n = g.n
    if n < 3:
        return 0.0
    lengths = np.arange(2, n, dtype=float)
    logp = -(lengths**gamma)
    log1mp = np.log1p(-np.exp(logp))
    total = float(np.dot(n - lengths, log1mp))
    for x, y in g.edges:
        k = y - x
        total += float(logp[k - 2] - log1mp[k - 2])
    return total


def log_gibbs_weight_unnormalized(g: SegmentGraph, params: ModelParams) -> float:
    """``-n**b * h_p(g) + log P_ref(g)``, without the partition function."""
    if g.n != params.n:
        raise ValueError(f"graph has {g.n} vertices, params expect {params.n}")
    return -params.inverse_temperature * h_p(g, params.p) + log_reference_weight(g, params.gamma)


def subgraph_log_prob(g_sub: SegmentGraph, gamma: float) -> float:
    """Log-probability that every long edge of ``g_sub`` is present."""
    return float(sum(log_edge_prob(y - x, gamma) for x, y in g_sub.edges))


def chain_rng(seed: int, *index: int) -> np.random.Generator:
    """Generator for the stream ``index`` of a run with master ``seed``.

    ``(seed, *index)`` is hashed by :class:`numpy.random.SeedSequence` into
    the PCG64 state, so streams are independent and replayable. With no
    index the stream is ``(seed, 0)``.
    """
    key = [int(seed), *(int(i) for i in index)] if index else [int(seed), 0]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(key)))


_BLOCK = 4096
_HP_CACHE_MAX = 200_000


@dataclass
class ChainState:
    """Mutable state of one Metropolis chain.

    ``cached_hp`` always equals ``h_p(graph, p)``. Random numbers are drawn
    from ``rng`` in blocks; the block buffers belong to the state so a chain
    is fully described by this object.
    """

    graph: SegmentGraph
    cached_hp: float
    rng: np.random.Generator
    steps_taken: int = 0
    accepted: int = 0
    _pair_idx: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64), repr=False)
    _log_u: np.ndarray = field(default_factory=lambda: np.empty(0), repr=False)
    _pos: int = field(default=0, repr=False)
    _hp_cache: dict = field(default_factory=dict, repr=False)

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.steps_taken if self.steps_taken else 0.0

    def _draw(self, m: int) -> tuple[int, float]:
        if self._pos >= len(self._log_u):
            self._pair_idx = self.rng.integers(0, m, size=_BLOCK)
            self._log_u = np.log(self.rng.random(size=_BLOCK))
            self._pos = 0
        i = self._pos
        self._pos += 1
        return int(self._pair_idx[i]), float(self._log_u[i])

    def _h(self, g: SegmentGraph, p: float) -> float:
        key = g.edges
        val = self._hp_cache.get(key)
        if val is None:
            if len(self._hp_cache) >= _HP_CACHE_MAX:
                self._hp_cache.clear()
            val = h_p(g, p)
            self._hp_cache[key] = val
        return val


class _PairTable:
    # per-n lookup of eligible pairs and their log-odds, shared across steps
    _cache: dict = {}

    @classmethod
    def get(cls, n: int, gamma: float):
        key = (n, gamma)
        tab = cls._cache.get(key)
        if tab is None:
            pairs = all_long_pairs(n)
            odds = {k: log_edge_odds(k, gamma) for k in range(2, n)}
            tab = (pairs, [odds[y - x] for x, y in pairs])
            if len(cls._cache) > 64:
                cls._cache.clear()
            cls._cache[key] = tab
        return tab


def init_chain(
    params: ModelParams,
    rng: np.random.Generator,
    start: Optional[SegmentGraph] | str = "path",
) -> ChainState:
    """Create a chain state.

    ``start`` is a graph, ``"path"`` (no long edges), ``"complete"`` or
    ``"reference"`` (one draw from the reference measure using ``rng``).
    """
    if isinstance(start, SegmentGraph):
        g = start
    elif start == "path":
        g = SegmentGraph(params.n)
    elif start == "complete":
        g = SegmentGraph.complete(params.n)
    elif start == "reference":
        g = sample_reference(params, rng)
    else:
        raise ValueError(f"unknown start {start!r}")
    if g.n != params.n:
        raise ValueError(f"start graph has {g.n} vertices, params expect {params.n}")
    state = ChainState(graph=g, cached_hp=0.0, rng=rng)
    state.cached_hp = state._h(g, params.p)
    return state


def flip_log_ratio(state: ChainState, params: ModelParams, x: int, y: int):
    """Flip pair ``(x, y)`` of the chain's graph.

    Returns ``(new_graph, new_hp, delta)`` where ``delta`` is the log ratio
    of unnormalised Gibbs weights, computed as the change in ``-n**b * h_p``
    plus or minus the pair's log odds.
    """
    g = state.graph
    odds = log_edge_odds(y - x, params.gamma)
    if (x, y) in g.edges:
        g_new = g.without_edge(x, y)
        sign = -1.0
    else:
        g_new = g.with_edge(x, y)
        sign = 1.0
    h_new = state._h(g_new, params.p)
    delta = -params.inverse_temperature * (h_new - state.cached_hp) + sign * odds
    return g_new, h_new, delta


def mcmc_step(state: ChainState, params: ModelParams) -> ChainState:
    """One Metropolis step with a uniformly chosen pair flip.

    The acceptance test first compares ``log u`` with an upper bound on the
    log ratio that needs no distance computation: adding an edge can lower
    ``h_p`` to 1 at best, and removing one cannot lower it at all. Proposals
    above the bound are rejected without evaluating the new graph; the
    resulting kernel is identical to plain Metropolis.
    """
    m = params.n_pairs
    state.steps_taken += 1
    if m == 0:
        return state
    pairs, odds = _PairTable.get(params.n, params.gamma)
    idx, log_u = state._draw(m)
    x, y = pairs[idx]
    o = odds[idx]
    if (x, y) in state.graph.edges:
        bound = -o
    else:
        bound = o + params.inverse_temperature * (state.cached_hp - 1.0)
    if log_u >= bound + 1e-9 * (1.0 + abs(bound)):
        return state
    g_new, h_new, delta = flip_log_ratio(state, params, x, y)
    if log_u < delta:
        state.graph = g_new
        state.cached_hp = h_new
        state.accepted += 1
    return state


def default_schedule(params: ModelParams) -> tuple[int, int]:
    """``(burn_in, thinning)`` defaults: 50 sweeps and one sweep of ``m`` steps."""
    m = max(params.n_pairs, 1)
    return 50 * m, m


def _check_schedule(burn_in, n_samples, thinning):
    for name, v in (("burn_in", burn_in), ("n_samples", n_samples), ("thinning", thinning)):
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise ValueError(f"{name} must be an integer, got {v!r}")
    if burn_in < 0 or thinning < 0:
        raise ValueError("burn_in and thinning must be >= 0")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")


def iter_chain(
    params: ModelParams,
    seed: int,
    burn_in: Optional[int] = None,
    n_samples: int = 1,
    thinning: Optional[int] = None,
    start="path",
    chain_index: int = 0,
) -> Iterator[SegmentGraph]:
    """Yield ``n_samples`` graphs, one every ``thinning`` steps after burn-in.

    ``thinning=0`` yields the same state repeatedly; ``thinning=1`` yields
    every step. Defaults come from :func:`default_schedule`.
    """
    d_burn, d_thin = default_schedule(params)
    burn_in = d_burn if burn_in is None else burn_in
    thinning = d_thin if thinning is None else thinning
    _check_schedule(burn_in, n_samples, thinning)
    state = init_chain(params, chain_rng(seed, chain_index), start)
    for _ in range(burn_in):
        mcmc_step(state, params)
    for _ in range(n_samples):
        for _ in range(thinning):
            mcmc_step(state, params)
        yield state.graph


def run_chain(
    params: ModelParams,
    seed: int,
    burn_in: Optional[int] = None,
    n_samples: int = 1,
    thinning: Optional[int] = None,
    start="path",
    chain_index: int = 0,
) -> list[SegmentGraph]:
    """List version of :func:`iter_chain`; deterministic in all arguments."""
    return list(iter_chain(params, seed, burn_in, n_samples, thinning, start, chain_index))


def transition_matrix(params: ModelParams) -> tuple[np.ndarray, list[SegmentGraph]]:
    """Explicit Metropolis kernel over all ``2**m`` graphs.

    State ``i`` is the graph whose long edges are the pairs at the set bits
    of ``i``, pairs ordered as in :func:`gibbsgraphs.graph.all_long_pairs`.
    Only practical for ``m`` up to about 12.
    """
    pairs = all_long_pairs(params.n)
    m = len(pairs)
    if m > 12:
        raise ValueError(f"{2**m} states is too many for an explicit kernel")
    graphs = [
        SegmentGraph(params.n, frozenset(pairs[j] for j in range(m) if i >> j & 1))
        for i in range(2**m)
    ]
    logw = np.array([log_gibbs_weight_unnormalized(g, params) for g in graphs])
    P = np.zeros((2**m, 2**m))
    for i in range(2**m):
        for j in range(m):
            k = i ^ (1 << j)
            P[i, k] = math.exp(min(0.0, logw[k] - logw[i])) / m
        P[i, i] = 1.0 - P[i].sum()
    if m == 0:
        P[0, 0] = 1.0
    return P, graphs
