"""Closed-form exponents and parameter-region predicates.

``b`` may be given as a float or as a :class:`fractions.Fraction`. Fractions
are compared exactly; floats are compared against the breakpoints
``(k-1)/k`` with absolute tolerance :data:`FLOAT_TOL`.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Optional, Union

from .graph import check_p

__all__ = [
    "FLOAT_TOL",
    "AlphaStarResult",
    "alpha_star",
    "critical_k",
    "in_exceptional_set",
    "scaling_law_covers",
    "local_limit_assumption_holds",
    "theory_table",
]

FLOAT_TOL = 1e-12

Real = Union[float, int, Fraction]


@dataclass(frozen=True)
class AlphaStarResult:
    value: float
    regime: str  # "gamma_lt_1", "gamma_gt_1" or "gamma_eq_1"
    critical_k: Optional[int] = None


def _tol(b: Real) -> Real:
    return 0 if isinstance(b, Rational) else FLOAT_TOL


def _clamp01(x: float) -> float:
    return min(max(x, 0.0), 1.0)


def critical_k(b: Real) -> Optional[int]:
    """The ``k >= 1`` with ``(k-1)/k <= b < k/(k+1)``, or ``None`` outside ``[0, 1)``.

    Breakpoints belong to the interval on their right.
    """
    tol = _tol(b)
    if b < -tol or b >= 1 - tol:
        return None
    if b < 0:
        return 1
    k0 = max(int(math.floor(1 / (1 - float(b)))), 1)
    for k in (k0 - 1, k0, k0 + 1, k0 + 2):
        if k < 1:
            continue
        lo = Fraction(k - 1, k)
        hi = Fraction(k, k + 1)
        if lo - tol <= b < hi - tol:
            return k
    raise AssertionError(f"no k found for b={b!r}")  # unreachable


def alpha_star(gamma: float, b: Real) -> AlphaStarResult:
    """Limiting exponent of ``h_p`` on the ``n`` scale."""
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    if gamma < 1:
        return AlphaStarResult(_clamp01((1 - float(b)) / (2 - gamma)), "gamma_lt_1")
    if gamma > 1:
        return AlphaStarResult(_clamp01((gamma - float(b)) / gamma), "gamma_gt_1")
    tol = _tol(b)
    if b < -tol:
        return AlphaStarResult(1.0, "gamma_eq_1")
    k = critical_k(b)
    if k is None:
        return AlphaStarResult(0.0, "gamma_eq_1")
    return AlphaStarResult(1.0 / (k + 1), "gamma_eq_1", k)


def in_exceptional_set(p: float, b: Real) -> bool:
    """Whether ``b`` lies in the set of ``gamma = 1`` parameters left open.

    For finite ``p`` this is the union over ``k >= 1`` of the closed
    intervals ``[(k-1)/k, (k-1)/k + max(0, (2p - (p-1)k) / (k(k+1)(k+2p)))]``;
    for ``p = inf`` it is ``[0, 1/4]`` together with the points ``(k-1)/k``.
    """
    p = check_p(p)
    tol = _tol(b)
    if b < -tol:
        return False
    if math.isinf(p):
        if b <= Fraction(1, 4) + tol:
            return True
        if b >= 1 - tol:
            return False
        k = critical_k(b)
        return abs(b - Fraction(k - 1, k)) <= tol
    if b >= 1 - tol:
        return False
    pf = Fraction(p)
    # interval k sits inside [(k-1)/k, k/(k+1)), so only the bracket of b matters
    k0 = critical_k(b)
    for k in range(max(k0 - 1, 1), k0 + 2):
        lo = Fraction(k - 1, k)
        width = max(Fraction(0), (2 * pf - (pf - 1) * k) / (k * (k + 1) * (k + 2 * pf)))
        if lo - tol <= b <= lo + width + tol:
            return True
    return False


def scaling_law_covers(gamma: float, b: Real, p: float) -> bool:
    """Whether the scaling law for ``h_p`` applies at ``(gamma, b, p)``."""
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    return gamma != 1 or not in_exceptional_set(p, b)


def local_limit_assumption_holds(gamma: float, b: Real, p: float) -> bool:
    """Parameter region where the local limit equals the reference local limit."""
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    if gamma < 1:
        return b < 1
    if gamma == 1:
        return b < 1 and not in_exceptional_set(p, b)
    return b < 0


def theory_table(gammas: Iterable[float], bs: Iterable[Real], p: float) -> str:
    """CSV over the ``(gamma, b)`` grid.

    Columns: ``gamma, b, p, alpha_star, critical_k, covered, in_E_p,
    local_limit_assumption``. ``alpha_star`` is left empty where the scaling
    law is not covered.
    """
    p = check_p(p)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(
        ["gamma", "b", "p", "alpha_star", "critical_k", "covered", "in_E_p", "local_limit_assumption"]
    )
    bs = list(bs)
    for gamma in gammas:
        for b in bs:
            res = alpha_star(gamma, b)
            covered = scaling_law_covers(gamma, b, p)
            w.writerow(
                [
                    repr(float(gamma)),
                    repr(float(b)),
                    "inf" if math.isinf(p) else repr(p),
                    repr(res.value) if covered else "",
                    "" if res.critical_k is None else res.critical_k,
                    int(covered),
                    int(in_exceptional_set(p, b)),
                    int(local_limit_assumption_holds(gamma, b, p)),
                ]
            )
    return buf.getvalue()
