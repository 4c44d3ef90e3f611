class TwoSquaresError(Exception):
    """Base class for errors raised by this package."""


class BudgetError(TwoSquaresError):
    """A requested computation exceeds its configured memory or iteration budget."""


class CoverageError(TwoSquaresError):
    """A sieve window does not cover the integers a computation needs."""


class UnclassifiedError(TwoSquaresError):
    """Membership of an integer could not be decided."""


class CutoffError(TwoSquaresError):
    """The prime cutoff is below an exceptional prime of the offset set."""
