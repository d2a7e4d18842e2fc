"""Edge layers and the hierarchical low-diameter graphs built from them.

A layer of spacing ``ell`` is the chain ``1, 1+ell, 1+2*ell, ...`` closed off
at ``n``. Unions of layers at geometrically varying spacings give graphs whose
typical distance is a power of ``n``; which spacings are used depends on
whether ``gamma`` is below, above or equal to 1.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Union

from .graph import EdgeKey, SegmentGraph, check_p, h_p
from .measures import subgraph_log_prob

__all__ = [
    "SubCritical",
    "SuperCritical",
    "Critical",
    "Regime",
    "layer",
    "round_spacing",
    "layer_spacings",
    "g_star",
    "critical_index",
    "ScalingRow",
    "verify_scaling",
    "scaling_csv",
]


@dataclass(frozen=True)
class SubCritical:
    """``gamma < 1``: layers added from the top, spacings ``n / 2**j``."""

    gamma: float
    alpha: float

    def __post_init__(self):
        if not 0 < self.gamma < 1:
            raise ValueError(f"SubCritical needs 0 < gamma < 1, got {self.gamma}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")


@dataclass(frozen=True)
class SuperCritical:
    """``gamma > 1``: layers added from the bottom, spacings ``2**j``."""

    gamma: float
    alpha: float

    def __post_init__(self):
        if not self.gamma > 1:
            raise ValueError(f"SuperCritical needs gamma > 1, got {self.gamma}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")


@dataclass(frozen=True)
class Critical:
    """``gamma = 1``: spacings ``n**(j/i)`` for ``j = 1 .. i-1``."""

    i: int
    gamma: float = 1.0

    def __post_init__(self):
        if isinstance(self.i, bool) or not isinstance(self.i, int) or self.i < 2:
            raise ValueError(f"Critical needs an integer i >= 2, got {self.i!r}")
        if self.gamma != 1.0:
            raise ValueError(f"Critical needs gamma = 1, got {self.gamma}")

    @property
    def alpha(self) -> float:
        # exponent of the typical distance produced by the construction
        return 1.0 / self.i


Regime = Union[SubCritical, SuperCritical, Critical]


def critical_index(alpha: float) -> int:
    """The integer ``i >= 2`` with ``1/i < alpha < 1/(i-1)``."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    i = math.floor(1.0 / alpha) + 1
    if not 1.0 / i < alpha < 1.0 / (i - 1):
        raise ValueError(f"alpha = {alpha} is of the form 1/k; no critical index")
    return i


def layer(n: int, ell: int) -> list[EdgeKey]:
    """Edges of the layer with spacing ``ell`` on ``[1, n]``.

    Returns ``{1, 1+ell}, ..., {1+(k-1)ell, 1+k*ell}, {1+k*ell, n}`` where
    ``k`` is the integer with ``1 + k*ell < n <= 1 + (k+1)*ell``. A spacing
    of ``n`` or more leaves only ``{1, n}``. Length-one edges are included
    (they coincide with path edges); zero-length pairs are not produced.
    """
    if isinstance(ell, bool) or not isinstance(ell, int):
        raise ValueError(f"ell must be an integer, got {ell!r}")
    if ell < 1:
        raise ValueError(f"ell must be >= 1, got {ell}")
    if n < 2:
        return []
    k = (n - 2) // ell
    edges = [(1 + j * ell, 1 + (j + 1) * ell) for j in range(k)]
    edges.append((1 + k * ell, n))
    return sorted(set(edges))


def round_spacing(x: float, n: int) -> int:
    """Nearest integer to ``x``, clamped to ``[1, n]``."""
    return min(max(int(math.floor(x + 0.5)), 1), max(n, 1))


def layer_spacings(n: int, regime: Regime) -> list[int]:
    """Integer spacings of the layers making up ``g_star(n, regime)``."""
    if isinstance(regime, SubCritical):
        target = n ** (1.0 - regime.alpha)
        i = 0
        while n * 2.0**-i >= target:
            i += 1
        raw = [1.0] + [n * 2.0**-j for j in range(i + 1)]
    elif isinstance(regime, SuperCritical):
        target = n**regime.alpha
        i = 0
        while 2.0**i <= target:
            i += 1
        raw = [2.0**j for j in range(i + 1)]
    elif isinstance(regime, Critical):
        raw = [1.0] + [n ** (j / regime.i) for j in range(1, regime.i)]
    else:
        raise TypeError(f"unknown regime {regime!r}")
    return sorted({round_spacing(x, n) for x in raw})


def g_star(n: int, regime: Regime) -> SegmentGraph:
    """Union of the regime's layers as a :class:`SegmentGraph`."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    edges = set()
    for ell in layer_spacings(n, regime):
        edges.update(e for e in layer(n, ell) if e[1] - e[0] >= 2)
    return SegmentGraph(n, frozenset(edges))


@dataclass(frozen=True)
class ScalingRow:
    n: int
    alpha_or_i: float
    h_p: float
    log_prob: float
    ratio_h: float
    ratio_logp: float


def verify_scaling(n_grid: Iterable[int], regime: Regime, p: float) -> list[ScalingRow]:
    """``h_p(g_star)`` and its reference log-probability across ``n_grid``.

    ``ratio_h`` is ``h_p / n**alpha`` and ``ratio_logp`` is
    ``-log_prob / n**(1 - alpha*(1 - gamma))``; for the critical regime
    ``alpha`` is ``1/i``. Bounded ratios along the grid indicate the
    expected scaling.
    """
    p = check_p(p)
    n_grid = list(n_grid)
    if not n_grid:
        raise ValueError("n_grid is empty")
    alpha = regime.alpha
    label = float(regime.i) if isinstance(regime, Critical) else alpha
    rows = []
    for n in n_grid:
        g = g_star(n, regime)
        hp = h_p(g, p)
        lp = subgraph_log_prob(g, regime.gamma)
        rows.append(
            ScalingRow(
                n=n,
                alpha_or_i=label,
                h_p=hp,
                log_prob=lp,
                ratio_h=hp / n**alpha,
                ratio_logp=-lp / n ** (1.0 - alpha * (1.0 - regime.gamma)),
            )
        )
    return rows


def scaling_csv(rows: Iterable[ScalingRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "alpha_or_i", "h_p", "log_prob", "ratio_h", "ratio_logp"])
    for r in rows:
        w.writerow([r.n, repr(r.alpha_or_i), repr(r.h_p), repr(r.log_prob), repr(r.ratio_h), repr(r.ratio_logp)])
    return buf.getvalue()
