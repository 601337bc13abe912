"""Exception hierarchy shared by the solvers and the CLI."""


class SelftrapError(Exception):
    """Base class for all package errors."""


class InvalidContextError(SelftrapError, ValueError):
    """Physical parameters violate their invariants (m <= 0, u <= 0, N < 1, ...)."""


class InvalidDensityError(SelftrapError, ValueError):
    """A density handed to the Poisson solver has significantly negative values."""


class StepSizeError(SelftrapError):
    """Integration overflowed before it produced a usable number of points."""


class BracketError(SelftrapError):
    """The eigenvalue bracket does not contain a nodeless state.

    ``direction`` is ``"lower"`` when the ground state lies below the bracket
    and ``"upper"`` when it lies above it, so callers can widen the right side.
    """

    def __init__(self, message, direction=None):
        super().__init__(message)
        self.direction = direction


class NoSolutionError(SelftrapError):
    """No stationary solution exists for the requested parameters.

    This is the expected outcome below the fold. ``evidence`` carries the
    numbers that justify the verdict (fold location, bracket values).
    """

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = dict(evidence or {})


class ConvergenceError(SelftrapError):
    """An iterative solver ran out of iterations or lost its bracket."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history or [])


class WindowError(SelftrapError):
    """A sweep window does not contain the feature being searched for."""
