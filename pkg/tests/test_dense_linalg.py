import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from fourier_lcu.dense_linalg import (
    check_hermitian,
    complete_unitary,
    eigh_hermitian,
    expm_general,
    phase_exponential,
    spectral_norm,
)
from fourier_lcu.errors import NonHermitian, NonSquare, NotNormalized

from conftest import random_matrix


def jacobi_eigenvalues(h, sweeps=60):
    """Cyclic complex Jacobi rotations, kept as an independent oracle."""
    a = np.array(h, dtype=complex)
    n = a.shape[0]
    for _ in range(sweeps):
        off = np.sum(np.abs(a - np.diag(np.diag(a))) ** 2)
        if off < 1e-28:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                phase = a[p, q] / abs(a[p, q])
                theta = 0.5 * np.arctan2(2 * abs(a[p, q]), (a[q, q] - a[p, p]).real)
                c, s = np.cos(theta), np.sin(theta)
                r = np.eye(n, dtype=complex)
                r[p, p], r[q, q] = c, c
                r[p, q], r[q, p] = s * phase, -s * phase.conjugate()
                a = r.conj().T @ a @ r
    return np.sort(np.diag(a).real)


def test_eigh_against_jacobi(rng):
    for n in (1, 2, 3, 5, 8):
        h = random_matrix(rng, n, hermitian=True)
        dec = eigh_hermitian(h)
        assert np.allclose(dec.eigenvalues, jacobi_eigenvalues(h), atol=1e-10)
        assert np.allclose(dec.reconstruct(), h, atol=1e-12)
        q = dec.eigenvectors
        assert np.allclose(q.conj().T @ q, np.eye(n), atol=1e-12)


def test_eigh_diagonal():
    dec = eigh_hermitian(np.diag([3.0, -1.0, 2.0]))
    assert np.allclose(dec.eigenvalues, [-1, 2, 3])


def test_rejects_bad_input():
    with pytest.raises(NonSquare):
        eigh_hermitian(np.zeros((2, 3)))
    with pytest.raises(NonHermitian):
        check_hermitian(np.array([[0, 1], [0, 0]]))


def test_phase_exponential_pauli():
    sz = np.diag([1.0, -1.0])
    u = phase_exponential(sz, 0.3)
    assert np.allclose(u, np.diag(np.exp([0.3j, -0.3j])), atol=1e-15)


@given(st.floats(-5, 5), st.integers(0, 10**6))
def test_phase_exponential_is_unitary(t, seed):
    h = random_matrix(np.random.default_rng(seed), 4, hermitian=True)
    u = phase_exponential(h, t)
    assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-12)


def test_expm_against_ode(rng):
    m = random_matrix(rng, 4) * 0.7
    x0 = rng.normal(size=4) + 1j * rng.normal(size=4)
    sol = solve_ivp(lambda t, x: m @ x, (0, 1.0), x0, method="DOP853", rtol=1e-12, atol=1e-13)
    assert np.allclose(expm_general(m) @ x0, sol.y[:, -1], atol=1e-8)


def test_expm_against_series(rng):
    m = random_matrix(rng, 3) * 0.2
    term = np.eye(3, dtype=complex)
    total = term.copy()
    for k in range(1, 40):
        term = term @ m / k
        total += term
    assert np.allclose(expm_general(m), total, atol=1e-14)


def test_expm_zero_and_nilpotent():
    assert np.allclose(expm_general(np.zeros((3, 3))), np.eye(3))
    n = np.array([[0.0, 2.0], [0.0, 0.0]])
    assert np.allclose(expm_general(n), [[1, 2], [0, 1]])


def test_spectral_norm(rng):
    assert spectral_norm(np.diag([3.0, -4.0])) == pytest.approx(4.0)
    assert spectral_norm(np.array([[0, 1], [0, 0]])) == pytest.approx(1.0)
    a = random_matrix(rng, 6)
    assert spectral_norm(a) == pytest.approx(np.linalg.svd(a, compute_uv=False)[0], rel=1e-12)


@given(st.integers(1, 16), st.integers(0, 10**6))
def test_complete_unitary(n, seed):
    r = np.random.default_rng(seed)
    v = r.normal(size=n) + 1j * r.normal(size=n)
    v /= np.linalg.norm(v)
    u = complete_unitary(v)
    assert np.allclose(u[:, 0], v, atol=1e-15)
    assert np.allclose(u.conj().T @ u, np.eye(n), atol=1e-12)


def test_complete_unitary_zero_leading_entry():
    v = np.array([0, 0, 1j])
    u = complete_unitary(v)
    assert np.allclose(u[:, 0], v)
    assert np.allclose(u.conj().T @ u, np.eye(3), atol=1e-14)


def test_complete_unitary_requires_unit_norm():
    with pytest.raises(NotNormalized):
        complete_unitary([1.0, 1.0])
