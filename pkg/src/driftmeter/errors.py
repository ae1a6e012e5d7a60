"""Exception and warning types shared across driftmeter.

Validation problems (bad input, bad configuration) derive from
``ValidationError``; failures that only show up while computing on valid
input derive from ``ComputationError``.  The CLI maps the two families to
different exit codes.
"""

from __future__ import annotations


class DriftMeterError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(DriftMeterError, ValueError):
    pass


class ComputationError(DriftMeterError, ArithmeticError):
    pass


# -- dataset ---------------------------------------------------------------

class MissingColumn(ValidationError):
    pass


class UnbalancedPanel(ValidationError):
    def __init__(self, item, time_point):
        super().__init__(f"item {item!r} has no observation at time point {time_point}")
        self.item = item
        self.time_point = time_point


class NonNumericCell(ValidationError):
    pass


class DuplicateObservation(ValidationError):
    pass


class UnknownTimePoint(ValidationError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown time point"


# -- clustering / comparison ----------------------------------------------

class InvalidConfig(ValidationError):
    pass


class DegenerateInput(ComputationError):
    pass


class ItemMismatch(ValidationError):
    pass


class KMismatch(ValidationError):
    pass


class IndexUnavailable(ValidationError):
    pass


class DegenerateRegression(ComputationError):
    pass


class InvalidThreshold(ValidationError):
    pass


# -- game --------------------------------------------------------------------

class OutOfRangeContribution(ValidationError):
    pass


class InvalidMix(ValidationError):
    pass


# -- warnings ------------------------------------------------------------------

class UndefinedIndexWarning(UserWarning):
    """An index was undefined for the given input and a conventional value was reported."""


class DegeneratePairWarning(UserWarning):
    """A class pair was skipped in the multi-class AUC because one side was empty."""


class AllZeroSeriesWarning(UserWarning):
    """Every VI in a series was zero, so the rescaled series is all ones."""
