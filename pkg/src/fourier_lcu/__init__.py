"""Fourier-extension linear combination of unitaries.

Sine-series approximations of f(t) = t on an extended interval turn an
arbitrary operator A = H1 + i H2 into a linear combination of the unitaries
exp(+-ik tau H1), exp(+-ik tau H2), which is then block-encoded.
"""

from .errors import FourierLCUError, NumericalFailure
from .fourier_extension import (
    CoefficientSet,
    ExtensionProblem,
    alpha_of,
    eta_for_m,
    eta_star,
    l2_error,
    series_eval,
    solve_least_squares,
)
from .kernels import BACKEND
from .lcu_engine import (
    assemble_block_encoding,
    build_decomposition,
    hermitian_split,
    verify_encoding,
)
from .regularized_fit import RegularizedProblem, fit_to_budget, pareto_sweep, solve_regularized

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CoefficientSet",
    "ExtensionProblem",
    "FourierLCUError",
    "NumericalFailure",
    "RegularizedProblem",
    "alpha_of",
    "assemble_block_encoding",
    "build_decomposition",
    "eta_for_m",
    "eta_star",
    "fit_to_budget",
    "hermitian_split",
    "l2_error",
    "pareto_sweep",
    "series_eval",
    "solve_least_squares",
    "solve_regularized",
    "verify_encoding",
]
