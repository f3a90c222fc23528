"""Exception types shared across the package.

The CLI maps these onto exit codes: validation/domain errors -> 1,
numerical non-convergence -> 2.
"""


class ValidationError(ValueError):
    """An input violated a declared invariant (names the invariant)."""

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class ConvergenceError(RuntimeError):
    """Quadrature failed to converge at the resolution cap.

    Carries the last two grid estimates so the caller can inspect how far
    apart they were.
    """

    def __init__(self, message, estimates=None):
        super().__init__(message)
        self.estimates = estimates


class ModelConsistencyError(ValueError):
    """Correlation values produced a non-physical density matrix."""


class DegeneracyError(RuntimeError):
    """A degenerate ground-state subspace could not be parity-resolved."""
