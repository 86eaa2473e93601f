"""Exception and warning types raised across the package."""


class DomainError(ValueError):
    """Argument outside the domain an operation supports."""


class CapabilityError(LookupError):
    """Requested derivative data is not available from a jet."""


class EvaluationError(ArithmeticError):
    """A user-supplied function returned a non-finite value."""


class PreconditionError(ValueError):
    """Input does not satisfy a documented precondition.

    ``index`` carries the first failing moment index when relevant.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DegenerateFitError(ValueError):
    """Truncation residuals are at rounding level; no slope can be fitted."""


class BlowUpError(FloatingPointError):
    """Grid state became non-finite; ``index`` is the first offending node."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ConsistencyWarning(UserWarning):
    """A scheme does not vanish on constant states."""
