"""Equiangular rank-one families that attain the sharp constants.

A family of size ``m`` with overlap ``s`` consists of unit vectors
``x_1..x_m`` with ``<x_j, x_k> = s`` for ``j != k`` (Gram matrix
``(1 - s) I + s J``) and the matrices ``A_k = u x_k^*`` for a fixed unit
anchor ``u``.  For these, the sum ``sum A_k`` is rank one and ``sum |A_k|``
has eigenvalues ``1 + (m - 1) s`` (once) and ``1 - s`` (``m - 1`` times), so
every norm in the ratio has a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SOutOfRange
from .matlin import as_matrix, gram_factor
from .schatten import PLike, as_exponent

TOL_FAMILY = 1e-9


def _check_m(m: int) -> None:
    if int(m) != m or m < 2:
        raise ValueError(f"family size must be an integer >= 2, got {m}")


def _check_s(s: float) -> None:
    if not 0.0 <= s <= 1.0:
        raise SOutOfRange(f"overlap s must lie in [0, 1], got {s}")


def build_gram(m: int, s: float) -> np.ndarray:
    _check_m(m)
    _check_s(s)
    return (1.0 - s) * np.eye(m) + s * np.ones((m, m))


@dataclass(frozen=True)
class EquiangularFamily:
    m: int
    s: float
    vectors: np.ndarray  # columns are x_1..x_m
    anchor: np.ndarray
    tuple: np.ndarray  # (m, n, n) stack of u x_k^*

    def gram(self) -> np.ndarray:
        return self.vectors.conj().T @ self.vectors


def build_family(m: int, s: float, anchor=None, dim: int | None = None) -> EquiangularFamily:
    """Build the equiangular family; ``dim >= m`` zero-pads into ``C^dim``."""
    g = build_gram(m, s)
    n = m if dim is None else int(dim)
    if n < m:
        raise ValueError(f"embedding dimension {n} is smaller than the family size {m}")
    x = np.zeros((n, m), dtype=np.complex128)
    # G is real symmetric, so its square root is real
    x[:m, :] = gram_factor(g).real
    x[:m, :] /= np.linalg.norm(x[:m, :], axis=0)
    if anchor is None:
        u = np.zeros(n, dtype=np.complex128)
        u[0] = 1.0
    else:
        u = as_matrix(np.reshape(anchor, (-1, 1)))[:, 0]
        if u.shape[0] != n:
            raise ValueError(f"anchor must have length {n}")
        nu = np.linalg.norm(u)
        if abs(nu - 1.0) > TOL_FAMILY:
            raise ValueError("anchor must be a unit vector")
    stack = np.einsum("i,jk->kij", u, x.conj())
    return EquiangularFamily(int(m), float(s), x, u, stack)


def optimal_overlap(m: int) -> float:
    """Overlap maximizing the Frobenius ratio, ``1 / (1 + sqrt m)``."""
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    return 1.0 / (1.0 + math.sqrt(m))


def lhs_sq_frobenius(m: int, s: float) -> float:
    """``||sum A_k||_F^2 = m + m(m-1)s`` for the family."""
    return m + m * (m - 1) * s


def rhs_sq_frobenius(m: int, s: float) -> float:
    """``||sum |A_k| ||_F^2 = m + m(m-1)s^2`` for the family."""
    return m + m * (m - 1) * s * s


def frobenius_ratio_sq(m: int, s: float) -> float:
    """Squared Frobenius ratio of the family, ``(1 + (m-1)s) / (1 + (m-1)s^2)``."""
    _check_m(m)
    _check_s(s)
    return (1.0 + (m - 1) * s) / (1.0 + (m - 1) * s * s)


def family_ratio(m: int, s: float, p: PLike) -> float:
    """Closed-form Schatten-p ratio of the family at overlap ``s``."""
    _check_m(m)
    _check_s(s)
    p = as_exponent(p)
    top = 1.0 + (m - 1) * s
    low = 1.0 - s
    num = math.sqrt(m * top)
    if p.is_inf:
        return num / top
    # top >= low >= 0; factor out top before powering
    den = top * (1.0 + (m - 1) * (low / top) ** p.value) ** (1.0 / p.value)
    return num / den


def family_ratio_slope(m: int, s: float, p: PLike) -> float:
    """Derivative in ``s`` of the log of :func:`family_ratio`."""
    _check_m(m)
    _check_s(s)
    p = as_exponent(p)
    top = 1.0 + (m - 1) * s
    low = 1.0 - s
    grow = 0.5 * (m - 1) / top
    if p.is_inf:
        return grow - (m - 1) / top
    r = (low / top) ** p.value
    # d/ds (1/p) log(top^p + (m-1) low^p) with top^p factored out
    shrink = (m - 1) * (1.0 - (low / top) ** (p.value - 1.0)) / top / (1.0 + (m - 1) * r)
    return grow - shrink


def spectral_ratio(s: float, m: int) -> float:
    """Ratio ``(1 + (m-1)s) / (1 - s)`` of the two eigenvalues of ``sum |A_k|``."""
    _check_s(s)
    if s >= 1.0:
        raise DomainError("the spectral ratio is unbounded at s = 1")
    return (1.0 + (m - 1) * s) / (1.0 - s)


def overlap_from_spectral_ratio(y: float, m: int) -> float:
    if not y >= 1.0:
        raise DomainError(f"spectral ratio must be >= 1, got {y}")
    return (y - 1.0) / (y + m - 1.0)


def ratio_in_spectral_form(y: float, m: int, p: PLike) -> float:
    """Family ratio as a function of the spectral ratio ``y``:
    ``sqrt(y (y + m - 1)) / (y^p + m - 1)^{1/p}``.
    """
    if not y >= 1.0:
        raise DomainError(f"spectral ratio must be >= 1, got {y}")
    return math.exp(log_ratio_in_spectral_form(math.log(y), m, p))


def log_ratio_in_spectral_form(log_y: float, m: int, p: PLike) -> float:
    """Log of :func:`ratio_in_spectral_form`, taking ``log y``; safe for huge ``y``."""
    if not log_y >= 0.0:
        raise DomainError(f"spectral ratio must be >= 1, got exp({log_y})")
    p = as_exponent(p)
    # log(y + m - 1) without forming y
    log_shift = log_y + math.log1p((m - 1.0) * math.exp(-log_y))
    log_num = 0.5 * (log_y + log_shift)
    if p.is_inf:
        return log_num - log_y
    return log_num - float(np.logaddexp(p.value * log_y, math.log(m - 1.0))) / p.value
