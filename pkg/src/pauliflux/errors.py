"""Exception types shared across the package."""


class DomainError(ValueError):
    """Invalid or degenerate geometry."""


class SolverError(RuntimeError):
    """An iterative solver failed to reach its tolerance."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class EigenError(RuntimeError):
    """The tridiagonal eigensolver could not isolate the requested eigenvalue."""


class WindowError(RuntimeError):
    """The angular-momentum window does not contain the spectral minimum."""


class HypothesisError(ValueError):
    """A bound was requested outside the hypotheses that make it valid."""
