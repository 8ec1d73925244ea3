"""Hermite spectral approximation on the real line.

Projection, interpolation, Gauss-Hermite quadrature and spectral
differentiation in the Hermite polynomial / Hermite function bases, the
weighted Cauchy transform machinery behind their error analysis, a-priori
error bounds with certified root-exponential decay rates, generalized
(|x|^{2 mu} weight) variants, and a CLI for running convergence
experiments.
"""

from .exceptions import (
    CapacityError,
    ConvergenceError,
    DomainError,
    EvaluationError,
    FitError,
    HermapproxError,
    ParseError,
    QuadratureError,
    TruncationError,
)
from .logscale import LogScaledValue
from .specfun import faddeeva, kummer_u_half, log_gamma

__all__ = [
    "LogScaledValue",
    "log_gamma",
    "faddeeva",
    "kummer_u_half",
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
