"""Fourier linear combination of unitaries and its dense block encoding.

An operator A = H1 + i H2 is approximated by

    A ~ sum_k (a_k / 2 tau) (i e^{-ik tau H1} - e^{-ik tau H2} - i e^{ik tau H1} + e^{ik tau H2})

which is 4m unitaries with weights kappa. Per k the terms are stored in the
order above, so kappa_{4(k-1)+j} = (a_k / 2 tau) * (i, -1, -i, 1)[j-1].
The ancilla register is the most significant tensor factor.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .dense_linalg import as_square, complete_unitary, eigh_hermitian, spectral_norm
from .errors import AnnihilatedState, DimensionMismatch, UnsupportedOrder, ZeroOperator, ZeroState
from .fourier_extension import FINITE_DIFFERENCE, CoefficientSet

PHASES = np.array([1j, -1.0, -1j, 1.0])

FD_COEFFICIENTS = {
    2: (1 / 2,),
    4: (2 / 3, -1 / 12),
    6: (3 / 4, -3 / 20, 1 / 60),
    8: (4 / 5, -1 / 5, 4 / 105, -1 / 280),
}


@dataclass(frozen=True)
class HermitianSplit:
    h1: np.ndarray
    h2: np.ndarray
    scale: float

    @property
    def dim(self):
        return self.h1.shape[0]

    def reconstruct(self):
        return self.h1 + 1j * self.h2


def hermitian_split(a):
    """A = H1 + i H2 with H1 = (A + A^dag)/2, H2 = (A - A^dag)/(2i).

    A zero operator still yields a split (scale 0); ``choose_tau`` rejects it.
    """
    a = as_square(np.asarray(a, dtype=complex), "operator")
    ad = a.conj().T
    h1 = 0.5 * (a + ad)
    h2 = -0.5j * (a - ad)
    scale = max(spectral_norm(h1), spectral_norm(h2))
    return HermitianSplit(h1, h2, scale)


def choose_tau(split, eta):
    """Time step placing the spectra of tau*H1 and tau*H2 inside [-pi/eta, pi/eta]."""
    if not split.scale > 0:
        raise ZeroOperator("operator has zero norm; tau is undefined")
    return np.pi / (eta * split.scale)


def ancilla_count(n_terms):
    """Qubits needed to index ``n_terms`` branches, ceil(log2 n)."""
    return max(int(n_terms) - 1, 0).bit_length()


@dataclass(frozen=True)
class LcuDecomposition:
    coefficients: CoefficientSet
    split: HermitianSplit
    tau: float
    kappas: np.ndarray
    alpha: float

    @property
    def n_terms(self):
        return self.kappas.size

    def unitaries(self):
        """The 4m unitaries (e^{-ik tau H1}, e^{-ik tau H2}, e^{ik tau H1}, e^{ik tau H2}) per k."""
        d1 = eigh_hermitian(self.split.h1)
        d2 = eigh_hermitian(self.split.h2)
        out = []
        for k in range(1, self.coefficients.m + 1):
            p1 = np.exp(-1j * k * self.tau * d1.eigenvalues)
            p2 = np.exp(-1j * k * self.tau * d2.eigenvalues)
            q1, q2 = d1.eigenvectors, d2.eigenvectors
            out.append((q1 * p1) @ q1.conj().T)
            out.append((q2 * p2) @ q2.conj().T)
            out.append((q1 * p1.conj()) @ q1.conj().T)
            out.append((q2 * p2.conj()) @ q2.conj().T)
        return out


def build_decomposition(coeffs, a, tau=None):
    """LCU weights for ``a``; tau defaults to pi / (eta * scale)."""
    split = hermitian_split(a)
    if tau is None:
        tau = choose_tau(split, coeffs.eta)
    elif not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    kappas = np.multiply.outer(coeffs.coefficients / (2.0 * tau), PHASES).ravel()
    alpha = float(np.sum(np.abs(kappas)))
    return LcuDecomposition(coeffs, split, float(tau), kappas, alpha)


def apply_lcu_sum(decomp):
    """Dense sum_j kappa_j U_j."""
    total = np.zeros((decomp.split.dim,) * 2, dtype=complex)
    for kappa, u in zip(decomp.kappas, decomp.unitaries()):
        total += kappa * u
    return total


def series_error_bound(decomp):
    """Eigenvalue-wise scalar series error summed over both Hermitian parts.

    Bounds ``||A - sum kappa_j U_j||_2`` by the triangle inequality.
    """
    a = decomp.coefficients.coefficients
    k = np.arange(1, a.size + 1)
    bound = 0.0
    for h in (decomp.split.h1, decomp.split.h2):
        lam = eigh_hermitian(h).eigenvalues
        approx = np.sin(decomp.tau * np.multiply.outer(lam, k)) @ a / decomp.tau
        bound += float(np.max(np.abs(lam - approx), initial=0.0))
    return bound


def prepare_v_w(decomp):
    """State-preparation unitaries V and W on the ancilla register.

    Column 0 of V holds sqrt(|kappa_j| / alpha); column 0 of W additionally
    carries the conjugate phase of kappa_j (phase 1 where kappa_j = 0).
    Rows past the 4m branches are zero.
    """
    if not decomp.alpha > 0:
        raise ZeroOperator("all LCU weights vanish; alpha = 0")
    n = decomp.n_terms
    dim = 2 ** ancilla_count(n)
    mag = np.abs(decomp.kappas)
    amp = np.sqrt(mag / decomp.alpha)
    phase = np.ones(n, dtype=complex)
    nz = mag > 0
    phase[nz] = decomp.kappas[nz].conj() / mag[nz]
    v = np.zeros(dim, dtype=complex)
    w = np.zeros(dim, dtype=complex)
    v[:n] = amp
    w[:n] = phase * amp
    # remove the last rounding bits so the norm check in complete_unitary holds
    v /= np.linalg.norm(v)
    w /= np.linalg.norm(w)
    return complete_unitary(v), complete_unitary(w)


@dataclass(frozen=True)
class BlockEncoding:
    unitary: np.ndarray
    ancilla_count: int
    alpha: float
    encoded_dim: int

    def block(self):
        """Top-left block <0|U|0> on the ancilla register."""
        d = self.encoded_dim
        return self.unitary[:d, :d]

    def apply(self, psi):
        """U (|0> (x) psi) as a full statevector."""
        psi = np.asarray(psi, dtype=complex)
        if psi.size != self.encoded_dim:
            raise DimensionMismatch(f"state has size {psi.size}, expected {self.encoded_dim}")
        return self.unitary[:, : self.encoded_dim] @ psi

    def postselect(self, psi):
        """Unnormalised ancilla-zero branch and its probability for unit-norm ``psi``."""
        out = self.apply(psi)
        branch = out[: self.encoded_dim]
        return branch, float(np.vdot(branch, branch).real)


def assemble_block_encoding(decomp):
    """U = (W^dag (x) I) SELECT (V (x) I) as a dense matrix."""
    v, w = prepare_v_w(decomp)
    d = decomp.split.dim
    n_a = ancilla_count(decomp.n_terms)
    pad = 2**n_a - decomp.n_terms
    eye = np.eye(d, dtype=complex)
    select = scipy.linalg.block_diag(*decomp.unitaries(), *([eye] * pad))
    u = np.kron(w.conj().T, eye) @ select @ np.kron(v, eye)
    return BlockEncoding(u, n_a, decomp.alpha, d)


def verify_encoding(enc, a):
    """Spectral-norm error ||A - alpha <0|U|0>||_2."""
    a = as_square(np.asarray(a, dtype=complex), "operator")
    if a.shape[0] != enc.encoded_dim:
        raise DimensionMismatch(f"operator dim {a.shape[0]} != encoded dim {enc.encoded_dim}")
    return spectral_norm(a - enc.alpha * enc.block())


def finite_difference_coefficients(p):
    if p not in FD_COEFFICIENTS:
        raise UnsupportedOrder(f"finite-difference order {p} not in {sorted(FD_COEFFICIENTS)}")
    return np.array(FD_COEFFICIENTS[p])


def finite_difference_lcu(a, tau, p):
    """Central-difference LCU of order ``p`` with step ``tau``.

    sum_k b_k (i e^{-ik tau H1} - i e^{ik tau H1} + e^{ik tau H2} - e^{-ik tau H2}) / tau
    """
    b = finite_difference_coefficients(p)
    split = hermitian_split(a)
    d1, d2 = eigh_hermitian(split.h1), eigh_hermitian(split.h2)
    k = np.arange(1, b.size + 1)
    # i(e^{-ix} - e^{ix}) = 2 sin x and e^{ix} - e^{-ix} = 2i sin x
    f1 = 2.0 * np.sin(tau * np.multiply.outer(d1.eigenvalues, k)) @ b / tau
    f2 = 2.0 * np.sin(tau * np.multiply.outer(d2.eigenvalues, k)) @ b / tau
    q1, q2 = d1.eigenvectors, d2.eigenvectors
    return (q1 * f1) @ q1.conj().T + 1j * (q2 * f2) @ q2.conj().T


def finite_difference_as_fourier(p, eta=1.0):
    """Sine coefficients a_k = 2 b_k reproducing the order-p difference scheme."""
    b = finite_difference_coefficients(p)
    return CoefficientSet(b.size, eta, 2.0 * b, FINITE_DIFFERENCE)


def success_metrics(decomp, psi0):
    """Q = ||psi0|| / ||A psi0|| and the postselection probability 1 / (alpha Q)^2."""
    psi0 = np.asarray(psi0, dtype=complex)
    norm0 = float(np.linalg.norm(psi0))
    if norm0 == 0.0:
        raise ZeroState("input state is zero")
    a = decomp.split.reconstruct()
    if psi0.size != a.shape[0]:
        raise DimensionMismatch(f"state has size {psi0.size}, expected {a.shape[0]}")
    norm1 = float(np.linalg.norm(a @ psi0))
    if norm1 <= 1e-14 * norm0 * max(decomp.split.scale, 1e-300):
        raise AnnihilatedState("A annihilates the input state")
    q = norm0 / norm1
    return q, 1.0 / (decomp.alpha * q) ** 2
