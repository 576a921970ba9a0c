"""Scalar maximization helpers shared by the family scan and the conjecture cross-check."""

from __future__ import annotations

import math
from typing import Callable

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(
    f: Callable[[float], float], a: float, b: float, xtol: float = 1e-13, max_iter: int = 500
) -> tuple[float, float, float, float]:
    """Maximize a unimodal ``f`` on ``[a, b]``.

    Returns ``(x, f(x), lo, hi)`` where ``[lo, hi]`` is the final bracket.
    """
    lo, hi = float(a), float(b)
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= xtol * max(1.0, abs(lo), abs(hi)):
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
    candidates = [(f(lo), lo), (f1, x1), (f2, x2), (f(hi), hi)]
    fx, x = max(candidates)
    return x, fx, lo, hi


def bisect_decreasing(g: Callable[[float], float], a: float, b: float, max_iter: int = 200) -> float:
    """Zero of ``g`` on ``[a, b]`` given ``g(a) >= 0 >= g(b)``, by bisection to machine precision."""
    lo, hi = float(a), float(b)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
