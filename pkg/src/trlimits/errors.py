"""Error types raised across the package.

Each error carries the data a caller needs to react (widen a window, switch
backend, report a clause) as attributes rather than only in its message.
"""

from __future__ import annotations

from typing import Any, Optional


class TRLimitsError(RuntimeError):
    """Base class for every error raised deliberately by this package."""


class DomainError(TRLimitsError, ValueError):
    """An argument lies outside the domain of an operation."""


class InternalEngineError(TRLimitsError):
    """An internal consistency check failed; indicates a bug, not bad input."""


class InsufficientPrecisionError(TRLimitsError):
    """A result needs coefficients beyond a series' guaranteed window."""

    def __init__(
        self, message: str, *, needed: int, known: int, source: str | None = None
    ) -> None:
        super().__init__(f"{message} (needed exponent {needed}, known up to {known})")
        self.needed = needed
        self.known = known
        self.source = source


class FieldExtensionRequiredError(TRLimitsError):
    """An exact computation needs an algebraic number outside the active field."""

    def __init__(self, message: str, *, polynomial: Optional[str] = None) -> None:
        super().__init__(message)
        self.polynomial = polynomial


class InvalidCurveError(TRLimitsError):
    """The data does not define a spectral curve (constant x, y = 0 near a point...)."""


class NonAdmissibleError(TRLimitsError):
    """Recursion refused on a curve violating local admissibility."""

    def __init__(self, message: str, *, point: Any = None, clause: str | None = None) -> None:
        super().__init__(message)
        self.point = point
        self.clause = clause


class UnsupportedGenusError(TRLimitsError):
    """Correlators were requested on a curve of positive genus."""

    def __init__(self, genus: int) -> None:
        super().__init__(f"curve has geometric genus {genus}; only genus 0 is supported")
        self.genus = genus


class TransalgebraicCurveError(TRLimitsError):
    """The input involves logarithms or exponentials in x or y."""


class ConfigurationError(TRLimitsError):
    """Inconsistent options, e.g. overlapping contour discs."""


class FiberInvalidError(TRLimitsError):
    """A family member at a bad parameter value was requested."""

    def __init__(self, message: str, *, t: Any = None) -> None:
        super().__init__(message)
        self.t = t


class ParseError(TRLimitsError):
    """Input text could not be parsed."""

    def __init__(
        self,
        message: str,
        *,
        source: str | None = None,
        line: int | None = None,
        column: int | None = None,
    ) -> None:
        where = ""
        if line is not None:
            where = f" at line {line}, column {column}"
        super().__init__(f"{message}{where}")
        self.source = source
        self.line = line
        self.column = column


__all__ = [
    "ConfigurationError",
    "DomainError",
    "FiberInvalidError",
    "FieldExtensionRequiredError",
    "InsufficientPrecisionError",
    "InternalEngineError",
    "InvalidCurveError",
    "NonAdmissibleError",
    "ParseError",
    "TRLimitsError",
    "TransalgebraicCurveError",
    "UnsupportedGenusError",
]
