"""Exception hierarchy shared by every module."""

from __future__ import annotations


class QBoundsError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParams(QBoundsError, ValueError):
    pass


class MissingElement(QBoundsError, KeyError):
    pass


class DisconnectedGraph(QBoundsError, ValueError):
    pass


class TooLarge(QBoundsError, ValueError):
    pass


class OrderMismatch(QBoundsError, ValueError):
    pass


class DimensionMismatch(QBoundsError, ValueError):
    pass


class ConvergenceFailure(QBoundsError, RuntimeError):
    def __init__(self, message: str, iterations: int):
        super().__init__(f"{message} (after {iterations} iterations)")
        self.iterations = iterations


class PatternMismatch(QBoundsError, ValueError):
    pass


class MultiplicityMismatch(QBoundsError, ValueError):
    pass


class VerificationFailed(QBoundsError):
    pass


class SpectrumNotSymmetric(QBoundsError, ValueError):
    pass


class SpectrumNotConsecutive(QBoundsError, ValueError):
    pass


class NonzeroDiagonal(QBoundsError, ValueError):
    pass


class ZeroDiagonalEntry(QBoundsError, ValueError):
    pass


class RealizationFailed(QBoundsError):
    pass


class HypothesisNotSatisfied(QBoundsError, ValueError):
    pass


class DegreeConditionViolated(QBoundsError, ValueError):
    pass


class InfeasibleReport(QBoundsError):
    pass


class CountMismatch(QBoundsError, ValueError):
    pass


class CatalogCorrupt(QBoundsError):
    pass


class UnknownKey(QBoundsError, KeyError):
    pass
