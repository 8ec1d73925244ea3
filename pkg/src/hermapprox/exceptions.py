"""Exception hierarchy for the library.

Every failure mode callers are expected to handle has its own class so that
tests and the CLI can distinguish a domain violation from a numerical
breakdown.
"""

from __future__ import annotations

__all__ = [
    "HermapproxError",
    "DomainError",
    "CapacityError",
    "QuadratureError",
    "TruncationError",
    "ConvergenceError",
    "FitError",
    "ParseError",
    "EvaluationError",
]


class HermapproxError(Exception):
    """Base class for all library-specific errors."""


class DomainError(HermapproxError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class CapacityError(HermapproxError, ValueError):
    """An argument exceeds the supported size/degree range of the operation."""


class QuadratureError(HermapproxError, RuntimeError):
    """A quadrature failed to reach its accuracy target."""


class TruncationError(QuadratureError):
    """A truncated infinite integral reported a tail estimate above threshold.

    Attributes
    ----------
    tail_estimate : float
        The estimated magnitude of the discarded tail.
    value_estimate : float
        Magnitude of the running integral estimate the tail was compared to.
    """

    def __init__(self, message: str, tail_estimate: float, value_estimate: float):
        super().__init__(message)
        self.tail_estimate = tail_estimate
        self.value_estimate = value_estimate


class ConvergenceError(HermapproxError, RuntimeError):
    """An iterative scheme (Newton, backward recurrence, doubling) failed."""


class FitError(HermapproxError, RuntimeError):
    """A decay fit had too few usable points or an unusable spread."""


class ParseError(HermapproxError, ValueError):
    """An expression failed to parse.

    Attributes
    ----------
    offset : int
        Byte offset into the source string where the error was detected.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class EvaluationError(HermapproxError, RuntimeError):
    """An expression evaluated to a non-finite value (pole, overflow, ...)."""
