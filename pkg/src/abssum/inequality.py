"""Evaluate the norm inequalities for sums of matrices on concrete inputs.

Each ``*_check`` function returns a :class:`BoundCheck`; the ones backed by a
theorem must always come out satisfied, so a failure beyond ``tol_ineq``
points at a numerical bug rather than a counterexample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AllZeroTuple, NotContraction, NotPSD
from .matlin import (
    TOL_PSD,
    abs_value,
    adjoint,
    as_matrix,
    hermitian_eig,
    hermitian_part,
    psd_power,
    singular_values,
)
from .schatten import (
    PExponent,
    PLike,
    as_exponent,
    as_tuple,
    direct_sum,
    norm_from_singular_values,
)

TOL_CONTRACTION = 1e-10


def tol_ineq(bound: float) -> float:
    return 1e-9 * max(1.0, abs(bound))


@dataclass(frozen=True)
class RatioReport:
    lhs: float
    rhs: float
    ratio: float
    p: PExponent
    m: int


@dataclass(frozen=True)
class BoundCheck:
    value: float
    bound: float
    satisfied: bool
    slack: float

    @classmethod
    def of(cls, value: float, bound: float, tol: float | None = None) -> "BoundCheck":
        slack = bound - value
        if tol is None:
            tol = tol_ineq(bound)
        return cls(float(value), float(bound), bool(slack >= -tol), float(slack))


def abs_sum(stack: np.ndarray) -> np.ndarray:
    """``sum_k |A_k|``."""
    return sum(abs_value(a) for a in stack)


def abs_adjoint_sum(stack: np.ndarray) -> np.ndarray:
    """``sum_k |A_k^*|``."""
    return sum(abs_value(adjoint(a)) for a in stack)


def _eigs_psd(h: np.ndarray) -> np.ndarray:
    return np.clip(hermitian_eig(h).eigenvalues, 0.0, None)


def ratio(mats, p: PLike) -> RatioReport:
    """``||sum A_k||_p / || sum |A_k| ||_p`` for a tuple of square matrices."""
    p = as_exponent(p)
    stack = as_tuple(mats)
    rhs_matrix = abs_sum(stack)
    # sum |A_k| is PSD, so its singular values are its eigenvalues
    rhs = norm_from_singular_values(_eigs_psd(rhs_matrix), p)
    if rhs == 0.0:
        raise AllZeroTuple("every member of the tuple is zero")
    lhs = norm_from_singular_values(singular_values(stack.sum(axis=0)), p)
    return RatioReport(lhs, rhs, lhs / rhs, p, stack.shape[0])


def frobenius_constant(m: int) -> float:
    """Sharp constant ``sqrt((1 + sqrt m) / 2)`` of the Frobenius inequality."""
    return math.sqrt((1.0 + math.sqrt(m)) / 2.0)


def frobenius_bound_check(mats) -> BoundCheck:
    r = ratio(mats, 2)
    return BoundCheck.of(r.ratio, frobenius_constant(r.m))


def universal_bound(p: PLike, m: int) -> float:
    """Proven upper bound ``sqrt(m) ** (1 - 1/p)`` on the best constant."""
    p = as_exponent(p)
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    expo = 1.0 if p.is_inf else 1.0 - 1.0 / p.value
    return math.sqrt(m) ** expo


def trace_contraction_check(x, y, q, t: float) -> BoundCheck:
    """``4|Tr(QXY)| <= t Tr(X^2 + Y^2) + Tr(XY + YX) / t`` for PSD X, Y and contraction Q."""
    x = as_matrix(x, square=True)
    y = as_matrix(y, square=True)
    q = as_matrix(q, square=True)
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    for name, z in (("X", x), ("Y", y)):
        lam = hermitian_eig(z).eigenvalues
        if lam[-1] < -TOL_PSD * max(abs(lam[0]), abs(lam[-1])):
            raise NotPSD(f"{name} is not positive semidefinite")
    if singular_values(q)[0] > 1.0 + TOL_CONTRACTION:
        raise NotContraction("Q has operator norm larger than 1")
    xy = x @ y
    yx = y @ x
    value = 4.0 * abs(np.trace(q @ xy))
    bound = t * np.trace(x @ x + y @ y).real + np.trace(xy + yx).real / t
    return BoundCheck.of(value, bound)


def block_matrix(a) -> np.ndarray:
    """The 2n x 2n matrix ``[[|A^*|, A], [A^*, |A|]]``."""
    a = as_matrix(a, square=True)
    return hermitian_part(np.block([[abs_value(adjoint(a)), a], [adjoint(a), abs_value(a)]]))


def block_positivity_check(a) -> BoundCheck:
    lam = hermitian_eig(block_matrix(a)).eigenvalues
    scale = max(abs(lam[0]), abs(lam[-1]), 1e-300)
    return BoundCheck.of(-lam[-1], TOL_PSD * scale, tol=0.0)


def _power_norm(h: np.ndarray, a: float, q: PExponent) -> float:
    """``|| h^a ||_q`` for PSD ``h``."""
    return norm_from_singular_values(_eigs_psd(psd_power(h, a)), q)


def geomean_bound_check(mats, q: PLike, a: float) -> BoundCheck:
    """``||f(|S|)||_q <= ||f(P)||_q^{1/2} ||f(Q)||_q^{1/2}`` with ``f(t) = t^a``.

    ``S = sum A_i``, ``P = sum |A_i^*|``, ``Q = sum |A_i|``.
    """
    q = as_exponent(q)
    _check_power(a)
    stack = as_tuple(mats)
    big_q = abs_sum(stack)
    if not np.any(big_q):
        raise AllZeroTuple("every member of the tuple is zero")
    big_p = abs_adjoint_sum(stack)
    s = stack.sum(axis=0)
    value = norm_from_singular_values(singular_values(s) ** a, q)
    bound = math.sqrt(_power_norm(big_p, a, q) * _power_norm(big_q, a, q))
    return BoundCheck.of(value, bound)


def power_norm_check(mats, q: PLike, a: float) -> BoundCheck:
    """``||f(|sum A_i|)||_q <= sqrt(m)^{1-1/q} ||sum f(|A_i|)||_q`` with ``f(t) = t^a``."""
    q = as_exponent(q)
    _check_power(a)
    stack = as_tuple(mats)
    powered = sum(psd_power(abs_value(x), a) for x in stack)
    rhs = norm_from_singular_values(_eigs_psd(powered), q)
    if rhs == 0.0:
        raise AllZeroTuple("every member of the tuple is zero")
    value = norm_from_singular_values(singular_values(stack.sum(axis=0)) ** a, q)
    return BoundCheck.of(value, universal_bound(q, stack.shape[0]) * rhs)


def direct_sum_checks(mats, q: PLike) -> tuple[BoundCheck, BoundCheck]:
    """Direct-sum inequalities for a PSD tuple ``X_1..X_m``.

    Returns ``(||(+)X_i||_q <= ||sum X_i||_q,
    sum ||X_i||_q <= m^{1-1/q} ||(+)X_i||_q)``.
    """
    q = as_exponent(q)
    stack = as_tuple(mats)
    m = stack.shape[0]
    dsum = norm_from_singular_values(_eigs_psd(direct_sum(stack)), q)
    total = norm_from_singular_values(_eigs_psd(stack.sum(axis=0)), q)
    parts = sum(norm_from_singular_values(_eigs_psd(x), q) for x in stack)
    expo = 1.0 if q.is_inf else 1.0 - 1.0 / q.value
    return BoundCheck.of(dsum, total), BoundCheck.of(parts, m**expo * dsum)


def _check_power(a: float) -> None:
    if not 0 < a <= 1:
        raise ValueError(f"power a must lie in (0, 1], got {a}")
