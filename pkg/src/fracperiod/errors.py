"""Exception types shared across the package."""

from __future__ import annotations


class FracPeriodError(Exception):
    """Base class for all package errors."""


class DomainError(FracPeriodError, ValueError):
    """Argument outside the region where an evaluator is valid."""


class EvaluationOverflowError(DomainError, OverflowError):
    """Result would exceed the double-precision exponent range."""


class SingularityError(FracPeriodError, ZeroDivisionError):
    """lambda^alpha hits an eigenvalue of the operator."""

    def __init__(self, mode: int, message: str) -> None:
        super().__init__(message)
        self.mode = mode


class UnsupportedOperatorError(FracPeriodError, ValueError):
    pass


class OffGridShiftError(FracPeriodError, ValueError):
    """The unit shift t -> t + 1 does not land on the sampling grid."""


class DimensionError(FracPeriodError, ValueError):
    pass


class ConfigError(FracPeriodError, ValueError):
    """Invalid scenario configuration; ``path`` names the offending field."""

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path
