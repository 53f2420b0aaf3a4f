"""Exception types shared by all modules."""


class ParameterError(ValueError):
    """Invalid arguments: dimension mismatch, out-of-range digits, bad context."""


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured budget.

    ``partial`` carries whatever count had been reached when the cap tripped.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DefectError(AssertionError):
    """A bound that is proven to hold was violated; indicates a bug or a false claim."""
