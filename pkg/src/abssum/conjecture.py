"""Closed-form candidate for the best constant ``c_p(m)``.

For ``p > 1`` the candidate is

    c = sqrt(x (x + m - 1)) / (x^p + m - 1)^(1/p),   x^p = 2x + m - 1,

with ``x > 1`` the unique positive root (``x^p - 2x`` is convex and the
equation is negative at ``x = 0``, so there is exactly one crossing).  As
``p -> 1+`` the root behaves like ``2^(1/(p-1))`` and leaves double range, so
both the root and the constant are computed in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import NoConvergence, PTooSmall
from .extremal import log_ratio_in_spectral_form
from .inequality import universal_bound
from .optimize1d import golden_section_max

ROOT_RTOL = 1e-12
MAX_ITER = 200
_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class ConjectureResult:
    p: float
    m: int
    x: float  # inf when the root exceeds double range; log_x is always valid
    log_x: float
    c: float
    residual: float  # |x^p - 2x - (m-1)| / (2x + m - 1)
    universal: float


def _check(p: float, m: int) -> None:
    if not p > 1.0:
        raise PTooSmall(f"the root equation needs p > 1, got {p}")
    if math.isinf(p):
        raise PTooSmall("p must be finite; use a large finite proxy for the operator norm")
    if int(m) != m or m < 2:
        raise ValueError(f"m must be an integer >= 2, got {m}")


def _log_residual(u: float, p: float, m: int) -> tuple[float, float]:
    """``k(u) = (p-1)u - log(2 + (m-1)e^{-u})`` and its derivative.

    ``k`` vanishes exactly at ``u = log x``, is increasing and concave, and
    never overflows.  The relative residual of the polynomial equation,
    ``|x^p - 2x - (m-1)| / (2x + m - 1)``, equals ``|expm1(k)|``.
    """
    w = (m - 1.0) * math.exp(-u)
    return (p - 1.0) * u - math.log(2.0 + w), (p - 1.0) + w / (2.0 + w)


def solve_root(p: float, m: int) -> tuple[float, float, float]:
    """Positive root of ``x^p - 2x - (m-1) = 0`` as ``(x, log x, relative residual)``.

    Safeguarded Newton iteration on ``u = log x``: a Newton step that leaves
    the current sign-change bracket is replaced by bisection.
    """
    _check(p, m)
    lo = 0.0
    hi = max(1.0, math.log(2.0) / (p - 1.0)) + math.log(m + 1.0)
    while _log_residual(hi, p, m)[0] <= 0.0:
        hi *= 2.0
    u = 0.5 * (lo + hi)
    for _ in range(MAX_ITER):
        k, dk = _log_residual(u, p, m)
        if k > 0:
            hi = u
        else:
            lo = u
        step = u - k / dk
        if not lo < step < hi:
            step = 0.5 * (lo + hi)
        # polish to machine precision, then enforce the residual contract
        if k == 0.0 or abs(step - u) <= 4 * _EPS * max(1.0, abs(u)):
            residual = abs(math.expm1(k))
            if residual > ROOT_RTOL:
                break
            x = math.exp(u) if u < 709.0 else math.inf
            return x, u, residual
        u = step
    raise NoConvergence(f"root solver stalled for p={p}, m={m}")


def conjectured_constant(p: float, m: int) -> ConjectureResult:
    """Evaluate the candidate constant at ``(p, m)``.

    At the root ``x^p + m - 1 = 2(x + m - 1)``, so the denominator is
    replaced by ``(2(x + m - 1))^{1/p}`` and the whole expression is formed
    from logarithms.
    """
    x, log_x, residual = solve_root(p, m)
    log_shift = log_x + math.log1p((m - 1.0) * math.exp(-log_x))  # log(x + m - 1)
    log_c = 0.5 * (log_x + log_shift) - (math.log(2.0) + log_shift) / p
    return ConjectureResult(
        p=float(p),
        m=int(m),
        x=x,
        log_x=log_x,
        c=math.exp(log_c),
        residual=residual,
        universal=universal_bound(p, m),
    )


def cross_check_scan(p: float, m: int) -> float:
    """Maximum of the family ratio over the spectral ratio ``y >= 1``, found by
    golden-section search with no reference to the root equation.

    The search runs over ``log y``; the upper end doubles until the ratio is
    seen to decrease, which brackets the (unique) maximizer.
    """
    _check(p, m)

    def f(v):
        return log_ratio_in_spectral_form(v, m, p)

    v_hi = 1.0
    # the ratio tends to 1 as y -> inf and rounding flattens the tail; cap the bracket
    while v_hi < 1e7 and f(v_hi) >= f(0.5 * v_hi):
        v_hi *= 2.0
    _, log_best, _, _ = golden_section_max(f, 0.0, v_hi, xtol=1e-14)
    return math.exp(log_best)


@dataclass
class LimitReport:
    m: int
    near_one: list[tuple[float, float]] = field(default_factory=list)  # (p - 1, c)
    large_p: list[tuple[float, float]] = field(default_factory=list)  # (p, c)
    frobenius_row: float = math.nan
    frobenius_expected: float = math.nan

    @property
    def gap_near_one(self) -> float:
        return abs(self.near_one[-1][1] - 1.0)

    @property
    def gap_large_p(self) -> float:
        return abs(self.large_p[-1][1] - math.sqrt(self.m))

    @property
    def monotone_near_one(self) -> bool:
        gaps = [abs(c - 1.0) for _, c in self.near_one]
        return all(b <= a for a, b in zip(gaps, gaps[1:]))

    @property
    def monotone_large_p(self) -> bool:
        gaps = [abs(c - math.sqrt(self.m)) for _, c in self.large_p]
        return all(b <= a for a, b in zip(gaps, gaps[1:]))


def limit_checks(
    m: int,
    eps=(1e-1, 1e-2, 1e-3, 1e-4),
    big_p=(10.0, 50.0, 200.0, 1000.0),
) -> LimitReport:
    """Candidate constant approaching ``p -> 1+`` and ``p -> inf``."""
    rep = LimitReport(m=int(m))
    for e in eps:
        rep.near_one.append((e, conjectured_constant(1.0 + e, m).c))
    for p in big_p:
        rep.large_p.append((p, conjectured_constant(p, m).c))
    rep.frobenius_row = conjectured_constant(2.0, m).c
    rep.frobenius_expected = math.sqrt((1.0 + math.sqrt(m)) / 2.0)
    return rep
