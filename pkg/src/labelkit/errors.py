"""Exception types shared across the package."""

from __future__ import annotations


class LabelkitError(Exception):
    """Base class for all errors raised by this package."""


class DataError(LabelkitError):
    """Invalid input data: bad fields, malformed files, broken invariants."""


class BudgetExceededError(LabelkitError):
    """An exact solver ran out of its node or time budget.

    Carries the best labeling found so far in ``incumbent`` (marked
    non-optimal) so callers can still use or persist the partial result.
    """

    def __init__(self, message: str, incumbent=None):
        super().__init__(message)
        self.incumbent = incumbent
