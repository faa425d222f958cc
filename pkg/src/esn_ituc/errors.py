"""Exception hierarchy shared by every module of the package."""


class EsnError(Exception):
    """Base class for all package errors."""


class ShapeError(EsnError, ValueError):
    """Operand dimensions are incompatible."""


class ParameterError(EsnError, ValueError):
    """An argument is outside its admissible range."""


class ConvergenceError(EsnError, ArithmeticError):
    """An iterative method exhausted its budget.

    ``best_estimate`` holds the last value the iteration produced.
    """

    def __init__(self, message, best_estimate=float("nan")):
        super().__init__(message)
        self.best_estimate = best_estimate


class SingularMatrixError(EsnError, ArithmeticError):
    """A linear system could not be factorized."""


class DegenerateSpectrumError(EsnError, ArithmeticError):
    """Spectral radius is zero so the ITUC is undefined."""


class DegenerateRangeError(EsnError, ValueError):
    """A series dimension is constant and cannot be rescaled or normalized against."""


class DegeneratePairError(EsnError, ArithmeticError):
    """Two reservoir states inside an MMDS window coincide."""

    def __init__(self, message, pairs=()):
        super().__init__(message)
        self.pairs = list(pairs)


class DivergenceError(EsnError, ArithmeticError):
    """A generated sequence escaped to infinity."""

    def __init__(self, message, step=-1):
        super().__init__(message)
        self.step = step


class UntrainedModelError(EsnError, RuntimeError):
    """A readout-dependent operation was called before training."""
