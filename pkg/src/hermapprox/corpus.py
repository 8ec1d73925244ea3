"""Builtin corpus of analytic target functions.

Each entry packages a function with the analytic metadata the
experiments need: the half-height ``rho`` of its largest strip of
analyticity (distance from the real axis to the nearest
singularity/branch point), algebraic growth bounds ``sigma_poly`` /
``sigma_func`` along strip boundaries (None when the corresponding
expansion family does not apply — e.g. the unweighted boundary integral
of ``invsqrt`` diverges, so only polynomial-basis analysis makes sense
for it), parity, and closed forms where they exist:

* ``weighted_integral`` = int e^{-x^2} f dx, via the package's own
  scaled complementary error function when f is a (Gaussian times)
  rational with quadratic denominator:
  int e^{-s x^2}/(x^2 + t^2) dx = (pi/t) wofz(i sqrt(s) t).
* analytic derivatives for the differentiation experiments.

All evaluators accept real or complex ndarrays and are analytic on
their stated strip (branch cuts verified to stay outside).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import DomainError
from .specfun import faddeeva

__all__ = ["FunctionSpec", "CORPUS", "get_function", "corpus_names"]


@dataclass(frozen=True)
class FunctionSpec:
    """An analytic target function with the metadata experiments consume."""

    name: str
    label: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    rho: float
    sigma_poly: float | None = None
    sigma_func: float | None = None
    parity: str | None = None  # "even" | "odd" | None
    weighted_integral: float | None = None  # int e^{-x^2} f dx when closed-form
    derivatives: dict = field(default_factory=dict)  # order -> callable

    def __call__(self, x):
        return self.evaluator(x)


def _gaussian_rational_integral(s: float, tau: float) -> float:
    """int e^{-s x^2} / (x^2 + tau^2) dx = (pi/tau) w(i sqrt(s) tau)."""
    return (math.pi / tau) * faddeeva(1j * math.sqrt(s) * tau).real


# ---------------------------------------------------------------------------
# evaluators (all vectorized, complex-capable)
# ---------------------------------------------------------------------------


def _runge25(z):
    z = np.asarray(z)
    return 1.0 / (1.0 + 25.0 * z * z)


def _gauss_pole4(z):
    z = np.asarray(z)
    return np.exp(-z * z) / (4.0 + z * z)


def _sech8(z):
    z = np.asarray(z)
    return _stable_sech(math.pi * z / 8.0)


def _stable_sech(w):
    """sech(w) = 2 e^{-w} / (1 + e^{-2w}) with Re w >= 0 by evenness.

    1/cosh overflows to inf (and to nan for complex points) once
    |Re w| > 710, which contour tails reach; this form never leaves
    double range and underflows cleanly to zero.
    """
    w = np.where(np.real(w) < 0, -w, w)
    e = np.exp(-w)
    return 2.0 * e / (1.0 + e * e)


def _gauss_pole2(z):
    z = np.asarray(z)
    return np.exp(-z * z) / (z * z + 2.0)


def _gauss_pole2_d1(z):
    z = np.asarray(z)
    g = 1.0 / (z * z + 2.0)
    return -2.0 * z * np.exp(-z * z) * (z * z + 3.0) * g * g


def _gauss_pole2_d2(z):
    z = np.asarray(z)
    g = 1.0 / (z * z + 2.0)
    z2 = z * z
    return np.exp(-z * z) * (
        (4.0 * z2 - 2.0) * g - 2.0 * g * g + 8.0 * z2 * g * g + 8.0 * z2 * g * g * g
    )


def _sin3_branch(z):
    z = np.asarray(z)
    return np.exp(-0.5 * z * z) * np.sin(3.0 * z) / np.sqrt(z * z + 2.0)


def _invsqrt(z):
    z = np.asarray(z)
    return 1.0 / np.sqrt(1.0 + z * z)


def _gauss_invsqrt(z):
    z = np.asarray(z)
    return np.exp(-z * z) / np.sqrt(1.0 + z * z)


def _scaled_target(z):
    z = np.asarray(z)
    return np.exp(-2.0 * z * z) / (1.0 + z * z)


CORPUS: dict[str, FunctionSpec] = {
    spec.name: spec
    for spec in [
        FunctionSpec(
            name="runge25",
            label="1/(1+25x^2)",
            evaluator=_runge25,
            rho=0.2,  # poles at +-i/5
            sigma_poly=-2.0,
            parity="even",
            weighted_integral=_gaussian_rational_integral(1.0, 0.2) / 25.0,
        ),
        FunctionSpec(
            name="gauss_pole4",
            label="exp(-x^2)/(4+x^2)",
            evaluator=_gauss_pole4,
            rho=2.0,  # poles at +-2i
            sigma_poly=-2.0,
            sigma_func=-2.0,
            parity="even",
            weighted_integral=_gaussian_rational_integral(2.0, 2.0),
        ),
        FunctionSpec(
            name="sech8",
            label="sech(pi x/8)",
            evaluator=_sech8,
            rho=4.0,  # poles of sech at +-4i
            sigma_poly=0.0,
            parity="even",
        ),
        FunctionSpec(
            name="gauss_pole2",
            label="exp(-x^2)/(x^2+2)",
            evaluator=_gauss_pole2,
            rho=math.sqrt(2.0),  # poles at +-i sqrt(2)
            sigma_func=-2.0,
            parity="even",
            weighted_integral=_gaussian_rational_integral(2.0, math.sqrt(2.0)),
            derivatives={1: _gauss_pole2_d1, 2: _gauss_pole2_d2},
        ),
        FunctionSpec(
            name="sin3_branch",
            label="exp(-x^2/2) sin(3x)/sqrt(x^2+2)",
            evaluator=_sin3_branch,
            rho=math.sqrt(2.0),  # branch points at +-i sqrt(2)
            sigma_func=-1.0,
            parity="odd",
            weighted_integral=0.0,  # odd integrand
        ),
        FunctionSpec(
            name="invsqrt",
            label="1/sqrt(1+x^2)",
            evaluator=_invsqrt,
            rho=1.0,  # branch points at +-i
            sigma_poly=-1.0,
            parity="even",
            # the unweighted boundary integral diverges (decay only
            # |x|^{-1}), so sigma_func stays None: no function-basis claims
        ),
        FunctionSpec(
            name="gauss_invsqrt",
            label="exp(-x^2)/sqrt(1+x^2)",
            evaluator=_gauss_invsqrt,
            rho=1.0,
            sigma_poly=-1.0,
            sigma_func=-1.0,
            parity="even",
        ),
        FunctionSpec(
            name="scaled_target",
            label="exp(-2x^2)/(1+x^2)",
            evaluator=_scaled_target,
            rho=1.0,  # poles at +-i
            sigma_func=-2.0,
            parity="even",
            weighted_integral=_gaussian_rational_integral(3.0, 1.0),
        ),
    ]
}


def corpus_names() -> list[str]:
    return list(CORPUS.keys())


def get_function(name: str) -> FunctionSpec:
    try:
        return CORPUS[name]
    except KeyError:
        raise DomainError(
            f"unknown builtin function {name!r}; available: {', '.join(CORPUS)}"
        ) from None
