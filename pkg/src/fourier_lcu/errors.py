"""Exception hierarchy shared by every module of the package."""


class FourierLCUError(Exception):
    """Base class for all package errors."""


class NonSquare(FourierLCUError, ValueError):
    pass


class NonHermitian(FourierLCUError, ValueError):
    pass


class NotNormalized(FourierLCUError, ValueError):
    pass


class DimensionMismatch(FourierLCUError, ValueError):
    pass


class ZeroOrder(FourierLCUError, ValueError):
    pass


class EmptyInterval(FourierLCUError, ValueError):
    pass


class NonpositiveScale(FourierLCUError, ValueError):
    pass


class ZeroOperator(FourierLCUError, ValueError):
    """The operator has zero norm, so the time step tau is undefined."""


class UnsupportedOrder(FourierLCUError, ValueError):
    pass


class ZeroState(FourierLCUError, ValueError):
    pass


class AnnihilatedState(FourierLCUError, ValueError):
    pass


class MalformedInput(FourierLCUError, ValueError):
    """A serialized matrix, state or record could not be parsed."""


class NumericalFailure(FourierLCUError, ArithmeticError):
    """Base for solver failures; the CLI maps these to exit code 3."""


class IllConditioned(NumericalFailure):
    """Cholesky of the normal system broke down.

    ``result`` holds the coefficient set from the QR fallback and
    ``condition`` the 2-norm condition estimate of the Gram matrix.
    """

    def __init__(self, message, result=None, condition=float("nan")):
        super().__init__(message)
        self.result = result
        self.condition = condition


class SignAmbiguity(NumericalFailure):
    pass


class NoBracket(NumericalFailure):
    pass


class Infeasible(NumericalFailure):
    pass


class NonConvergence(NumericalFailure):
    """Iteration cap reached; ``result`` holds the best iterate."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
