"""Schatten norms, direct sums and majorization tests."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.linalg import block_diag

from .errors import NonFinite, NotSquare, PTooSmall, ShapeMismatch, UnsortedInput
from .matlin import as_matrix, singular_values

TOL_MAJ = 1e-9
LOG_ZERO = 1e-300


@dataclass(frozen=True)
class PExponent:
    """Schatten exponent ``p`` in ``[1, inf]``; ``inf`` is the operator norm."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if math.isnan(v) or v < 1:
            raise PTooSmall(f"Schatten exponent must satisfy p >= 1, got {self.value}")
        object.__setattr__(self, "value", v)

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.value)

    @classmethod
    def parse(cls, text: str) -> "PExponent":
        t = str(text).strip().lower()
        if t in ("inf", "infinity", "∞"):
            return cls(math.inf)
        try:
            v = float(t)
        except ValueError:
            raise ValueError(f"cannot parse Schatten exponent {text!r}") from None
        if math.isinf(v):
            raise ValueError("write the operator-norm exponent as the literal 'inf'")
        return cls(v)

    def __str__(self) -> str:
        return "inf" if self.is_inf else repr(self.value)


PLike = Union[PExponent, float, int, str]


def as_exponent(p: PLike) -> PExponent:
    if isinstance(p, PExponent):
        return p
    if isinstance(p, str):
        return PExponent.parse(p)
    return PExponent(p)


def as_tuple(mats, *, square: bool = True) -> np.ndarray:
    """Validate a tuple of same-shape matrices, returned as an ``(m, r, c)`` stack."""
    if isinstance(mats, np.ndarray) and mats.ndim == 3:
        stack = mats.astype(np.complex128, copy=True)
    else:
        mats = [as_matrix(a) for a in mats]
        if not mats:
            raise ValueError("a matrix tuple needs at least one member")
        shape = mats[0].shape
        for a in mats[1:]:
            if a.shape != shape:
                raise ShapeMismatch(f"tuple members have shapes {shape} and {a.shape}")
        stack = np.stack(mats)
    if stack.shape[0] < 1 or stack.shape[1] == 0 or stack.shape[2] == 0:
        raise ValueError(f"invalid tuple shape {stack.shape}")
    if not np.all(np.isfinite(stack)):
        raise NonFinite("tuple has NaN or Inf entries")
    if square and stack.shape[1] != stack.shape[2]:
        raise NotSquare(f"tuple members must be square, got {stack.shape[1:]}")
    return stack


def norm_from_singular_values(s: np.ndarray, p: PLike) -> float:
    """Schatten norm from a vector of singular values.

    The largest value is factored out before powering so large ``p`` neither
    overflows nor underflows.
    """
    p = as_exponent(p)
    s = np.abs(np.asarray(s, dtype=float))
    top = float(s.max()) if s.size else 0.0
    if top == 0.0:
        return 0.0
    if p.is_inf:
        return top
    return top * float(np.sum((s / top) ** p.value)) ** (1.0 / p.value)


def schatten_norm(a, p: PLike) -> float:
    return norm_from_singular_values(singular_values(a), p)


def frobenius(a) -> float:
    """Entrywise root-sum-of-squares; agrees with ``schatten_norm(a, 2)``."""
    a = as_matrix(a)
    return float(np.sqrt(np.sum(a.real**2 + a.imag**2)))


def direct_sum(mats) -> np.ndarray:
    stack = as_tuple(mats, square=True)
    return block_diag(*stack)


def _check_sorted(v: np.ndarray, name: str) -> None:
    if v.ndim != 1:
        raise ValueError(f"{name} must be a vector")
    if np.any(np.diff(v) > 0):
        raise UnsortedInput(f"{name} is not sorted nonincreasing")


def weak_majorization_holds(a, b, tol: float = TOL_MAJ) -> bool:
    """True iff every leading partial sum of ``a`` is at most that of ``b``.

    Slack is relative: ``tol * max(1, |partial sum of b|)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_sorted(a, "a")
    _check_sorted(b, "b")
    if a.shape != b.shape:
        raise ValueError("vectors must have the same length")
    ca, cb = np.cumsum(a), np.cumsum(b)
    return bool(np.all(ca <= cb + tol * np.maximum(1.0, np.abs(cb))))


def weak_log_majorization_holds(a, b, tol: float = TOL_MAJ, zero: float = LOG_ZERO) -> bool:
    """True iff every leading partial product of ``a`` is at most that of ``b``.

    Products are compared as sums of logarithms, so long chains neither
    overflow nor underflow.  Entries ``<= zero`` count as exact zeros: once
    ``b`` reaches a zero, ``a`` must have reached one as well.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_sorted(a, "a")
    _check_sorted(b, "b")
    if a.shape != b.shape:
        raise ValueError("vectors must have the same length")
    if np.any(a < 0) or np.any(b < 0):
        raise ValueError("log-majorization needs nonnegative entries")
    slack = math.log1p(tol)
    la = lb = 0.0
    for x, y in zip(a, b):
        if x <= zero:
            # left product is zero from here on
            return True
        if y <= zero:
            return False
        la += math.log(x)
        lb += math.log(y)
        if la > lb + slack:
            return False
    return True

