"""Empirical lower bounds on the best constant by searching over matrix tuples.

Two searches live here:

* :func:`scan_family` maximizes the closed-form ratio of the equiangular
  rank-one family over its overlap ``s`` (a 1-D problem);
* :func:`search` runs seeded restarts of a derivative-free pattern search
  over general complex tuples.  It only ever reports the best ratio *found*.

The pattern search works on ``2 m n^2`` real parameters (interleaved real and
imaginary parts).  Singular values are not differentiable where they cross,
so no gradients are used.  The objective is scale invariant and every trial
point is renormalized to unit Frobenius norm before it is evaluated, which
keeps the iterates from drifting to 0 or infinity and makes the recorded
trace exactly nondecreasing.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .conjecture import conjectured_constant
from .errors import AllZeroTuple
from .extremal import family_ratio, family_ratio_slope
from .inequality import ratio, universal_bound
from .optimize1d import bisect_decreasing, golden_section_max
from .schatten import PExponent, PLike, as_exponent, as_tuple, norm_from_singular_values

MIN_STEP = 1e-10


@dataclass(frozen=True)
class SearchConfig:
    m: int = 2
    n: int = 4
    p: PExponent = PExponent(2.0)
    restarts: int = 32
    max_iters: int = 3000
    step: float = 0.05
    shrink: float = 0.5
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "p", as_exponent(self.p))
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be >= 1")
        if not self.step > 0:
            raise ValueError("initial step must be positive")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink factor must lie in (0, 1)")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


class LocalResult(NamedTuple):
    tuple: np.ndarray
    ratio: float
    iters: int
    trace: list  # objective after each accepted move, starting value first


class RestartTrace(NamedTuple):
    index: int
    seed: int
    ratio: float
    iters: int


@dataclass
class SearchReport:
    config: SearchConfig
    best_ratio: float
    best_tuple: np.ndarray
    best_restart: int
    universal: float
    conjectured: float | None
    max_evaluated: float
    restarts: list[RestartTrace] = field(default_factory=list)

    @property
    def gap_to_conjecture(self) -> float | None:
        return None if self.conjectured is None else self.conjectured - self.best_ratio

    @property
    def gap_to_universal(self) -> float:
        return self.universal - self.best_ratio


def restart_seed(master_seed: int, index: int) -> int:
    """64-bit seed for restart ``index``, hashed from ``(master_seed, index)``.

    Restart streams depend only on their own index, so any execution order
    reproduces the same numbers.
    """
    ss = np.random.SeedSequence([int(master_seed) & (2**64 - 1), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def random_tuple(m: int, n: int, seed: int) -> np.ndarray:
    """``m`` standard complex Gaussian ``n x n`` matrices, jointly normalized to unit Frobenius norm."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((m, n, n)) + 1j * rng.standard_normal((m, n, n))
    return z / np.linalg.norm(z)


def _objective(stack: np.ndarray, p: PExponent) -> float:
    """Norm ratio without input validation; the hot path of the search."""
    _, s, vh = np.linalg.svd(stack)
    abs_sum = np.einsum("kji,kj,kjl->il", vh.conj(), s, vh)
    rhs_eigs = np.clip(np.linalg.eigvalsh(0.5 * (abs_sum + abs_sum.conj().T)), 0.0, None)
    rhs = norm_from_singular_values(rhs_eigs, p)
    if rhs == 0.0:
        return math.nan
    lhs = norm_from_singular_values(np.linalg.svd(stack.sum(axis=0), compute_uv=False), p)
    return lhs / rhs


def _pack(stack: np.ndarray) -> np.ndarray:
    return stack.reshape(-1).view(np.float64).copy()


def _unpack(theta: np.ndarray, shape) -> np.ndarray:
    return theta.view(np.complex128).reshape(shape)


def local_maximize(mats, p: PLike, cfg: SearchConfig, rng: np.random.Generator | None = None) -> LocalResult:
    """Pattern-search ascent of the norm ratio from ``mats``.

    Directions alternate two coordinate axes then one random unit direction.
    Each direction is tried with ``+step`` then ``-step``; the first strict
    improvement is accepted.  After a full sweep (every axis once plus half as
    many random directions) with no acceptance, the step is multiplied by
    ``cfg.shrink``.  Stops after ``cfg.max_iters`` directions or when the
    step falls below ``1e-10``.
    """
    p = as_exponent(p)
    stack = as_tuple(mats)
    if not np.any(stack):
        raise AllZeroTuple("every member of the tuple is zero")
    if rng is None:
        rng = np.random.default_rng(0)
    shape = stack.shape
    theta = _pack(stack / np.linalg.norm(stack))
    best = _objective(_unpack(theta, shape), p)
    trace = [best]
    dim = theta.size
    sweep = dim + (dim + 1) // 2
    step = cfg.step
    axis = 0
    since_accept = 0
    iters = 0
    while iters < cfg.max_iters and step >= MIN_STEP:
        iters += 1
        if iters % 3 == 0:
            d = rng.standard_normal(dim)
            d /= np.linalg.norm(d)
        else:
            d = np.zeros(dim)
            d[axis] = 1.0
            axis = (axis + 1) % dim
        moved = False
        for sign in (1.0, -1.0):
            cand = theta + sign * step * d
            norm = np.linalg.norm(cand)
            if norm == 0.0:
                continue
            cand /= norm
            val = _objective(_unpack(cand, shape), p)
            if val > best:
                theta, best = cand, val
                trace.append(best)
                moved = True
                break
        if moved:
            since_accept = 0
        else:
            since_accept += 1
            if since_accept >= sweep:
                step *= cfg.shrink
                since_accept = 0
    return LocalResult(_unpack(theta, shape).copy(), float(best), iters, trace)


def _run_restart(cfg: SearchConfig, index: int) -> tuple[RestartTrace, LocalResult]:
    seed = restart_seed(cfg.seed, index)
    start = random_tuple(cfg.m, cfg.n, seed)
    rng = np.random.default_rng([seed, 1])
    res = local_maximize(start, cfg.p, cfg, rng)
    return RestartTrace(index, seed, res.ratio, res.iters), res


def search(cfg: SearchConfig) -> SearchReport:
    """Best norm ratio over ``cfg.restarts`` seeded pattern-search runs."""
    indices = range(cfg.restarts)
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(lambda i: _run_restart(cfg, i), indices))
    else:
        results = [_run_restart(cfg, i) for i in indices]
    # ties go to the lowest restart index
    best_idx = max(range(len(results)), key=lambda i: (results[i][1].ratio, -i))
    best = results[best_idx][1]
    conj = None
    if not cfg.p.is_inf and cfg.p.value > 1.0 and cfg.m >= 2:
        conj = conjectured_constant(cfg.p.value, cfg.m).c
    return SearchReport(
        config=cfg,
        best_ratio=best.ratio,
        best_tuple=best.tuple,
        best_restart=best_idx,
        universal=universal_bound(cfg.p, cfg.m),
        conjectured=conj,
        max_evaluated=max(max(r.trace) for _, r in results),
        restarts=[t for t, _ in results],
    )


def reevaluate(report: SearchReport) -> float:
    """Ratio of the witness tuple recomputed through the validated public path."""
    return ratio(report.best_tuple, report.config.p).ratio


def scan_family(m: int, p: PLike, grid_points: int = 201) -> tuple[float, float]:
    """Maximize the equiangular family ratio over the overlap ``s in [0, 1]``.

    A coarse grid locates the best cell, golden-section search refines it and
    a final bisection on the sign of the analytic log-derivative pins the
    maximizer to machine precision (value comparisons alone cannot resolve
    ``s`` better than about ``sqrt(eps)`` at a smooth maximum).
    """
    p = as_exponent(p)
    if grid_points < 3:
        raise ValueError("grid_points must be >= 3")
    grid = np.linspace(0.0, 1.0, grid_points)
    vals = [family_ratio(m, s, p) for s in grid]
    i = int(np.argmax(vals))
    cell_lo, cell_hi = grid[max(i - 1, 0)], grid[min(i + 1, grid_points - 1)]
    s_best, r_best, _, _ = golden_section_max(
        lambda s: family_ratio(m, s, p), cell_lo, cell_hi, xtol=1e-12
    )

    def slope(s):
        return family_ratio_slope(m, s, p)

    if slope(cell_lo) > 0 > slope(cell_hi):
        # values near the top differ only by rounding; the slope sign is reliable
        s_best = bisect_decreasing(slope, cell_lo, cell_hi)
        r_best = family_ratio(m, s_best, p)
    return float(s_best), float(r_best)
