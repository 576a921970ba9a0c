"""Dense complex linear algebra kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Every public
function validates its input (finite entries, square where required) and is
pure: inputs are never modified.

Tolerances (all relative):

* ``TOL_RECON`` reconstruction accuracy promised by the factorizations,
* ``TOL_HERM`` allowed asymmetry ``||H - H*||_F / ||H||_F`` before a matrix is
  rejected as non-Hermitian (no silent symmetrization),
* ``TOL_PSD`` eigenvalues in ``[-TOL_PSD * ||P||_2, 0)`` are clamped to zero.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import NonFinite, NotHermitian, NotPSD, NotSquare

TOL_RECON = 1e-10
TOL_HERM = 1e-10
TOL_PSD = 1e-9


class HermitianSpectrum(NamedTuple):
    eigenvalues: np.ndarray  # real, nonincreasing
    vectors: np.ndarray  # unitary, eigenvectors as columns


class SingularSpectrum(NamedTuple):
    values: np.ndarray  # s_1 >= ... >= s_k >= 0
    left: np.ndarray
    right: np.ndarray  # A = left @ diag(values) @ right^*


class PolarForm(NamedTuple):
    isometry: np.ndarray
    positive: np.ndarray


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Coerce ``a`` to a 2-D complex128 array and validate it."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFinite("matrix has NaN or Inf entries")
    if square and m.shape[0] != m.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {m.shape}")
    return m


def adjoint(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def _check_hermitian(h: np.ndarray, tol: float) -> None:
    scale = np.linalg.norm(h)
    if np.linalg.norm(h - h.conj().T) > tol * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")


def hermitian_eig(h, tol: float = TOL_HERM) -> HermitianSpectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues nonincreasing."""
    h = as_matrix(h, square=True)
    _check_hermitian(h, tol)
    w, v = np.linalg.eigh(hermitian_part(h))
    return HermitianSpectrum(w[::-1].copy(), v[:, ::-1].copy())


def svd(a) -> SingularSpectrum:
    """Thin SVD with singular values in nonincreasing order."""
    a = as_matrix(a)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return SingularSpectrum(s, u, vh.conj().T)


def singular_values(a) -> np.ndarray:
    return np.linalg.svd(as_matrix(a), compute_uv=False)


def abs_value(a) -> np.ndarray:
    """Matrix absolute value ``|A| = (A^* A)^{1/2}``.

    Computed from the SVD ``A = W S V^*`` as ``V S V^*`` so that the
    eigenvalues of the result are exactly the singular values of ``A`` and no
    roundoff from forming ``A^* A`` has to be clamped.
    """
    a = as_matrix(a, square=True)
    _, s, vh = np.linalg.svd(a)
    v = vh.conj().T
    return hermitian_part((v * s) @ vh)


def polar(a) -> PolarForm:
    """Right polar decomposition ``A = U |A|`` with ``U`` unitary.

    For singular ``A`` the isometry is completed to a unitary through the full
    SVD bases; only ``U @ P == A`` and unitarity are guaranteed, not the
    choice on the null spaces.
    """
    a = as_matrix(a, square=True)
    w, s, vh = np.linalg.svd(a)
    v = vh.conj().T
    return PolarForm(w @ vh, hermitian_part((v * s) @ vh))


def _psd_spectrum(p, tol_psd: float) -> HermitianSpectrum:
    lam, vecs = hermitian_eig(p)
    scale = max(abs(lam[0]), abs(lam[-1]))
    if lam[-1] < -tol_psd * scale:
        raise NotPSD(f"smallest eigenvalue {lam[-1]:.3e} is negative beyond tolerance")
    return HermitianSpectrum(np.clip(lam, 0.0, None), vecs)


def psd_power(p, a: float, tol_psd: float = TOL_PSD) -> np.ndarray:
    """``P^a`` for Hermitian PSD ``P`` and ``a > 0``."""
    if not a > 0:
        raise ValueError(f"power must be positive, got {a}")
    lam, vecs = _psd_spectrum(p, tol_psd)
    return hermitian_part((vecs * lam**a) @ vecs.conj().T)


def psd_sqrt(p, tol_psd: float = TOL_PSD) -> np.ndarray:
    return psd_power(p, 0.5, tol_psd)


def gram_factor(g, tol_psd: float = TOL_PSD) -> np.ndarray:
    """Return ``X`` with ``X^* X = G``; the columns of ``X`` realize the Gram matrix.

    Uses the Hermitian square root, which works unchanged at exact rank
    deficiency.
    """
    return psd_sqrt(g, tol_psd)


def operator_norm(a) -> float:
    return float(singular_values(a)[0])


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_complex(shape, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_psd(n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    b = random_complex((n, rank or n), rng)
    return hermitian_part(b @ b.conj().T)
