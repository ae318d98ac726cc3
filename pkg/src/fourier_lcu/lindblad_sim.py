"""Vectorised Lindblad dynamics and the driven-dephasing qubit benchmark.

Density matrices are vectorised by stacking columns, vec(rho) =
rho.reshape(-1, order="F"), so vec(X rho Y) = (Y^T kron X) vec(rho).
"""

from dataclasses import dataclass

import numpy as np

from .dense_linalg import as_square, check_hermitian, expm_general, spectral_norm
from .errors import DimensionMismatch
from .fourier_extension import ExtensionProblem, eta_for_m, solve_least_squares
from .lcu_engine import assemble_block_encoding, build_decomposition
from .regularized_fit import path_endpoint

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

STRATEGIES = ("least_squares", "regularized")


def vec(rho):
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v, dim=None):
    v = np.asarray(v)
    dim = int(round(np.sqrt(v.size))) if dim is None else dim
    return v.reshape(dim, dim, order="F")


@dataclass(frozen=True)
class LindbladSystem:
    hamiltonian: np.ndarray
    lindblad_ops: tuple
    time: float

    def __post_init__(self):
        h = np.asarray(self.hamiltonian, dtype=complex)
        check_hermitian(h, tol=1e-12)
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(
            self, "lindblad_ops", tuple(np.asarray(op, dtype=complex) for op in self.lindblad_ops)
        )

    @property
    def dim(self):
        return self.hamiltonian.shape[0]

    def rhs(self, rho):
        """Right side of the master equation in matrix form."""
        h = self.hamiltonian
        out = -1j * (h @ rho - rho @ h)
        for op in self.lindblad_ops:
            ld = op.conj().T
            out += op @ rho @ ld - 0.5 * (ld @ op @ rho + rho @ ld @ op)
        return out


@dataclass(frozen=True)
class DemoParams:
    rabi_frequency: float = 1e5
    phase: float = np.pi / 4
    dephasing_time: float = 1.0
    cycles: float = 500.0

    def __post_init__(self):
        for name in ("rabi_frequency", "dephasing_time", "cycles"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def omega(self):
        return 2.0 * np.pi * self.rabi_frequency

    @property
    def time(self):
        return self.cycles / self.rabi_frequency


@dataclass(frozen=True)
class DemoReport:
    m: int
    strategy: str
    statevector_error: float
    alpha: float
    cost: float
    unitarity_defect: float


def build_liouvillian(system):
    """Column-stacking Liouvillian M with d vec(rho)/dt = M vec(rho)."""
    h = as_square(system.hamiltonian, "hamiltonian")
    d = h.shape[0]
    eye = np.eye(d)
    m = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for op in system.lindblad_ops:
        if op.shape != (d, d):
            raise DimensionMismatch(f"Lindblad operator shape {op.shape} != {(d, d)}")
        ldl = op.conj().T @ op
        m = m + np.kron(op.conj(), op) - 0.5 * np.kron(eye, ldl) - 0.5 * np.kron(ldl.T, eye)
    return m


def propagator(m, t):
    return expm_general(np.asarray(m) * t)


def demo_system(params=DemoParams()):
    """Resonantly driven qubit with pure dephasing."""
    w, phi = params.omega, params.phase
    h = 0.5 * w * (SIGMA_X * np.sin(phi) + SIGMA_Y * np.cos(phi))
    dephasing = np.sqrt(1.0 / (2.0 * params.dephasing_time)) * SIGMA_Z
    return LindbladSystem(h, (dephasing,), params.time)


def demo_propagator(params=DemoParams()):
    system = demo_system(params)
    return propagator(build_liouvillian(system), system.time)


def demo_initial_state():
    """vec(|+><+|), which already has unit Euclidean norm."""
    plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
    return vec(np.outer(plus, plus)).astype(complex)


def unitarity_defect(a):
    a = as_square(a)
    return spectral_norm(a.conj().T @ a - np.eye(a.shape[0]))


def strategy_coefficients(strategy, m, eta=None):
    eta = eta_for_m(m) if eta is None else eta
    if strategy == "least_squares":
        return solve_least_squares(ExtensionProblem(m, eta))
    if strategy == "regularized":
        return path_endpoint(m, eta)
    raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")


def run_demo(params, strategy, m):
    """Block-encode the demo propagator and compare the postselected state.

    The ancilla-zero branch of U (|0> (x) psi0) is renormalised and compared
    in L2 with A psi0 / ||A psi0||.
    """
    if not 1 <= m <= 64:
        raise ValueError(f"m must lie in 1..64, got {m}")
    a = demo_propagator(params)
    coeffs = strategy_coefficients(strategy, m)
    decomp = build_decomposition(coeffs, a)
    enc = assemble_block_encoding(decomp)
    psi0 = demo_initial_state()
    psi0 = psi0 / np.linalg.norm(psi0)
    branch, _ = enc.postselect(psi0)
    exact = a @ psi0
    error = float(np.linalg.norm(branch / np.linalg.norm(branch) - exact / np.linalg.norm(exact)))
    return DemoReport(
        m=int(m),
        strategy=strategy,
        statevector_error=error,
        alpha=decomp.alpha,
        cost=decomp.alpha * m,
        unitarity_defect=unitarity_defect(a),
    )
