"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the physical or configured domain."""


class NonConvergenceError(RuntimeError):
    """A numeric routine failed to reach its requested tolerance.

    Carries the best available estimate and the tolerance actually achieved.
    """

    def __init__(self, message, best_estimate=None, achieved=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.achieved = achieved


class ConsistencyError(RuntimeError):
    """An internal cross-check failed; indicates a bug, not bad input."""
