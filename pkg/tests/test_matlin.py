import numpy as np
import pytest

from abssum.errors import NonFinite, NotHermitian, NotPSD, NotSquare
from abssum.extremal import build_gram
from abssum.matlin import (
    abs_value,
    gram_factor,
    hermitian_eig,
    polar,
    psd_power,
    random_psd,
    random_unitary,
    svd,
)

from conftest import cgauss


def test_hermitian_eig_diagonal():
    lam, v = hermitian_eig(np.diag([2.0, -1.0]))
    np.testing.assert_allclose(lam, [2.0, -1.0])
    np.testing.assert_allclose(np.abs(v), np.eye(2))


def test_hermitian_eig_pauli_x():
    lam, _ = hermitian_eig([[0, 1], [1, 0]])
    np.testing.assert_allclose(lam, [1.0, -1.0], atol=1e-15)


def test_hermitian_eig_equiangular_gram():
    lam, _ = hermitian_eig(build_gram(3, 0.5))
    np.testing.assert_allclose(lam, [2.0, 0.5, 0.5], atol=1e-14)


def test_hermitian_eig_reconstructs(rng):
    h = cgauss(rng, 5, 5)
    h = h + h.conj().T
    lam, v = hermitian_eig(h)
    assert np.all(np.diff(lam) <= 0)
    np.testing.assert_allclose(v @ np.diag(lam) @ v.conj().T, h, atol=1e-10 * np.linalg.norm(h))
    np.testing.assert_allclose(v.conj().T @ v, np.eye(5), atol=1e-10)


def test_hermitian_eig_rejects():
    with pytest.raises(NotHermitian):
        hermitian_eig([[0, 1], [0, 0]])
    with pytest.raises(NonFinite):
        hermitian_eig([[np.nan, 0], [0, 1]])
    with pytest.raises(NotSquare):
        hermitian_eig(np.ones((2, 3)))


def test_svd_examples():
    np.testing.assert_allclose(svd(np.diag([3.0, -4.0])).values, [4.0, 3.0])
    np.testing.assert_allclose(svd(np.zeros((3, 3))).values, 0.0)
    u = np.array([1, 1j, 0]) / np.sqrt(2)
    x = np.array([0.6, 0, 0.8j])
    np.testing.assert_allclose(svd(np.outer(u, x.conj())).values, [1.0, 0.0, 0.0], atol=1e-15)


def test_svd_reconstructs_rectangular(rng):
    a = cgauss(rng, 4, 6)
    s, u, v = svd(a)
    np.testing.assert_allclose(u @ np.diag(s) @ v.conj().T, a, atol=1e-10 * s[0])


@pytest.mark.parametrize(
    "a, expected",
    [
        ([[0, 1], [0, 0]], np.diag([0.0, 1.0])),
        (np.diag([-3.0, 2.0]), np.diag([3.0, 2.0])),
        ([[2, 1], [1, 2]], [[2, 1], [1, 2]]),
    ],
)
def test_abs_value_examples(a, expected):
    np.testing.assert_allclose(abs_value(a), expected, atol=1e-14)


def test_abs_value_properties(rng):
    for _ in range(50):
        n = int(rng.integers(1, 7))
        a = cgauss(rng, n, n)
        p = abs_value(a)
        s = svd(a).values
        np.testing.assert_allclose(p, p.conj().T, atol=0)
        np.testing.assert_allclose(p @ p, a.conj().T @ a, atol=1e-10 * s[0] ** 2)
        np.testing.assert_allclose(hermitian_eig(p).eigenvalues, s, atol=1e-9 * s[0])


def test_singular_values_unitarily_invariant(rng):
    a = cgauss(rng, 5, 5)
    w, v = random_unitary(5, rng), random_unitary(5, rng)
    s = svd(a).values
    np.testing.assert_allclose(svd(w @ a @ v).values, s, atol=1e-9 * s[0])


def test_polar_examples(rng):
    w = random_unitary(4, rng)
    u, p = polar(w)
    np.testing.assert_allclose(u, w, atol=1e-12)
    np.testing.assert_allclose(p, np.eye(4), atol=1e-12)

    u, p = polar(np.diag([-3.0, 2.0]))
    np.testing.assert_allclose(u, np.diag([-1.0, 1.0]), atol=1e-15)
    np.testing.assert_allclose(p, np.diag([3.0, 2.0]), atol=1e-15)


def test_polar_singular_nilpotent():
    a = np.array([[0, 1], [0, 0]], dtype=complex)
    u, p = polar(a)
    np.testing.assert_allclose(p, np.diag([0.0, 1.0]), atol=1e-15)
    np.testing.assert_allclose(u @ p, a, atol=1e-15)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(2), atol=1e-15)


def test_polar_random(rng):
    for n in range(1, 7):
        a = cgauss(rng, n, n)
        if n > 2:
            a[:, 0] = a[:, 1]  # singular
        u, p = polar(a)
        assert np.linalg.norm(u @ p - a) <= 1e-9 * np.linalg.norm(a)
        assert np.linalg.norm(u.conj().T @ u - np.eye(n)) <= 1e-9
        np.testing.assert_allclose(p, abs_value(a), atol=1e-12 * np.linalg.norm(a))


def test_psd_power_examples():
    np.testing.assert_allclose(psd_power(np.diag([4.0, 9.0]), 0.5), np.diag([2.0, 3.0]), atol=1e-14)
    np.testing.assert_allclose(psd_power([[8.0]], 1 / 3), [[2.0]], atol=1e-14)
    p = np.array([[2.0, 1j], [-1j, 2.0]])
    np.testing.assert_allclose(psd_power(p, 1), p, atol=1e-14)


@pytest.mark.parametrize("a", [0.25, 0.5, 2.0])
def test_psd_power_roundtrip(rng, a):
    p = random_psd(5, rng)
    back = psd_power(psd_power(p, a), 1 / a)
    assert np.linalg.norm(back - p) <= 1e-8 * np.linalg.norm(p)


def test_psd_power_clamps_roundoff_and_rejects_negative():
    p = np.diag([1.0, -1e-12])
    np.testing.assert_allclose(psd_power(p, 0.5), np.diag([1.0, 0.0]))
    with pytest.raises(NotPSD):
        psd_power(np.diag([1.0, -1e-3]), 0.5)
    with pytest.raises(NotHermitian):
        psd_power([[1, 1], [0, 1]], 0.5)


def test_gram_factor_identity():
    np.testing.assert_allclose(gram_factor(np.eye(3)), np.eye(3), atol=1e-15)


def test_gram_factor_equiangular():
    s = 1 / (1 + np.sqrt(2))
    x = gram_factor(build_gram(2, s))
    np.testing.assert_allclose(np.linalg.norm(x, axis=0), 1.0, atol=1e-14)
    assert abs(np.vdot(x[:, 0], x[:, 1]) - s) < 1e-14


def test_gram_factor_rank_one():
    x = gram_factor(np.ones((4, 4)))
    np.testing.assert_allclose(x.conj().T @ x, np.ones((4, 4)), atol=1e-12)
    for k in range(1, 4):
        np.testing.assert_allclose(x[:, k], x[:, 0], atol=1e-7)


def test_gram_factor_random(rng):
    g = random_psd(6, rng, rank=3)
    x = gram_factor(g)
    assert np.linalg.norm(x.conj().T @ x - g) <= 1e-9 * np.linalg.norm(g)
    with pytest.raises(NotPSD):
        gram_factor(-np.eye(2))
