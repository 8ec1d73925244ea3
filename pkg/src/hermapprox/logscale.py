"""Log-scaled scalar values.

Quantities in this library routinely overflow double precision (Hermite
polynomials grow like 2^n n!, weighted Cauchy transforms like Gamma(n+1)).
A :class:`LogScaledValue` carries such a quantity as

    value = phase * exp(log_mag)

where ``log_mag`` is the natural log of the magnitude and ``phase`` is a
unit-modulus complex number (or ``+-1.0`` in purely real contexts).  The
exact zero is represented by ``phase == 0`` together with
``log_mag == -inf``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .exceptions import DomainError

__all__ = ["LogScaledValue"]

_PHASE_TOL = 1e-14


@dataclass(frozen=True)
class LogScaledValue:
    """A number stored as ``phase * exp(log_mag)``.

    Parameters
    ----------
    log_mag : float
        Natural logarithm of the magnitude (``-inf`` for zero).
    phase : complex or float
        Unit-modulus phase factor, or 0 for the zero value.  Real sign
        factors ``+-1.0`` are accepted and kept as floats.
    """

    log_mag: float
    phase: complex

    def __post_init__(self):
        mag = abs(self.phase)
        if mag == 0.0:
            if not (math.isinf(self.log_mag) and self.log_mag < 0):
                raise DomainError(
                    "zero phase requires log_mag == -inf, got "
                    f"log_mag={self.log_mag!r}"
                )
        elif abs(mag - 1.0) > _PHASE_TOL:
            raise DomainError(f"phase must have unit modulus, got |phase|={mag!r}")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero() -> "LogScaledValue":
        return LogScaledValue(-math.inf, 0.0)

    @staticmethod
    def from_value(value: complex) -> "LogScaledValue":
        """Represent an ordinary finite float/complex exactly."""
        mag = abs(value)
        if mag == 0.0:
            return LogScaledValue.zero()
        if math.isinf(mag) or math.isnan(mag):
            raise DomainError(f"cannot log-scale non-finite value {value!r}")
        if isinstance(value, complex):
            return LogScaledValue(math.log(mag), value / mag)
        return LogScaledValue(math.log(mag), 1.0 if value > 0 else -1.0)

    @staticmethod
    def from_log_parts(log_mag: float, phase: complex) -> "LogScaledValue":
        """Build from possibly unnormalized phase (it is renormalized)."""
        mag = abs(phase)
        if mag == 0.0:
            return LogScaledValue.zero()
        return LogScaledValue(log_mag + math.log(mag), phase / mag)

    # -- accessors --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return abs(self.phase) == 0.0

    def materialize(self) -> complex:
        """Return ``phase * exp(log_mag)`` as an ordinary number.

        Overflows to ``inf`` and underflows to 0 the way ``exp`` does;
        round-trips ordinary magnitudes (|log_mag| < 700) to ~1e-16.
        """
        if self.is_zero:
            return 0.0
        if isinstance(self.phase, float):
            if self.log_mag > 709.0:
                return math.inf * self.phase
            return self.phase * math.exp(self.log_mag)
        if self.log_mag > 709.0:
            return cmath.infj * self.phase  # direction is meaningless; callers guard
        return self.phase * math.exp(self.log_mag)

    def materialize_real(self) -> float:
        v = self.materialize()
        if isinstance(v, complex):
            return v.real
        return v

    # -- arithmetic (multiplicative group; addition is done by callers
    #    who factor out a common exponent) ---------------------------------

    def __mul__(self, other: "LogScaledValue") -> "LogScaledValue":
        if self.is_zero or other.is_zero:
            return LogScaledValue.zero()
        return LogScaledValue.from_log_parts(
            self.log_mag + other.log_mag, self.phase * other.phase
        )

    def __truediv__(self, other: "LogScaledValue") -> "LogScaledValue":
        if other.is_zero:
            raise ZeroDivisionError("division by log-scaled zero")
        if self.is_zero:
            return LogScaledValue.zero()
        return LogScaledValue.from_log_parts(
            self.log_mag - other.log_mag, self.phase / other.phase
        )

    def __neg__(self) -> "LogScaledValue":
        if self.is_zero:
            return self
        return LogScaledValue(self.log_mag, -self.phase)

    def scale_exp(self, delta_log: float) -> "LogScaledValue":
        """Multiply by exp(delta_log) exactly in log space."""
        if self.is_zero:
            return self
        return LogScaledValue(self.log_mag + delta_log, self.phase)
