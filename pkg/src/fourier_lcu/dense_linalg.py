"""Dense complex matrix kernels.

Matrices are plain ``numpy`` arrays. Every function here is pure; inputs
are never modified.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NonHermitian, NonSquare, NotNormalized

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # orthonormal columns

    def reconstruct(self):
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.conj().T


def as_square(m, name="matrix"):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"{name} must be square, got shape {m.shape}")
    return m


def check_hermitian(h, tol=HERMITIAN_TOL):
    h = as_square(h)
    scale = max(1.0, float(np.max(np.abs(h), initial=0.0)))
    dev = float(np.max(np.abs(h - h.conj().T), initial=0.0))
    if dev > tol * scale:
        raise NonHermitian(f"matrix deviates from Hermitian by {dev:.3e}")
    return h


def eigh_hermitian(h):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    h = check_hermitian(h)
    # symmetrise so round-off asymmetry never leaks into the factorisation
    hs = 0.5 * (h + h.conj().T)
    w, q = np.linalg.eigh(hs)
    return EigenDecomposition(w, q)


def phase_exponential(h, t):
    """Return exp(i t H) for Hermitian ``h`` via its eigendecomposition."""
    dec = eigh_hermitian(h)
    q = dec.eigenvectors
    return (q * np.exp(1j * t * dec.eigenvalues)) @ q.conj().T


def expm_general(m):
    """Matrix exponential of an arbitrary square matrix (Pade scaling and squaring)."""
    m = as_square(m)
    return scipy.linalg.expm(m)


def spectral_norm(m):
    """Largest singular value, from the spectrum of M^dagger M."""
    m = as_square(m)
    if m.size == 0:
        return 0.0
    top = eigh_hermitian(m.conj().T @ m).eigenvalues[-1]
    return float(np.sqrt(max(top, 0.0)))


def complete_unitary(first_column, dim=None):
    """Unitary whose column 0 is ``first_column``.

    The remaining columns come from the Householder reflector that maps
    e0 to the given column; the reflector sign follows the phase of the
    leading entry so that the reflector vector never cancels.
    """
    v = np.asarray(first_column, dtype=complex).ravel()
    n = v.size if dim is None else int(dim)
    if n != v.size:
        raise ValueError(f"dim={n} does not match column length {v.size}")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-12:
        raise NotNormalized(f"first column has norm {norm!r}")
    v0 = v[0]
    phase = v0 / abs(v0) if abs(v0) > 0 else 1.0 + 0.0j
    w = v.copy()
    w[0] += phase
    # w^dagger w = 2 (1 + |v0|) > 0 always
    reflector = np.eye(n, dtype=complex) - np.outer(w, w.conj()) / (1.0 + abs(v0))
    u = -phase * reflector
    u[:, 0] = v
    return u
