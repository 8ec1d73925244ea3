"""Approximation machinery for the even weight ``|x|^(2 mu) e^(-x^2)``.

For ``mu > -1/2`` this weight has finite moments and a family of monic
orthogonal polynomials whose three-term recurrence coefficients are known
in closed form (they must be — and are, in the test suite — reproduced by
an independent moment-based construction before use).  This module
evaluates the polynomials stably at any degree, computes their weighted
Cauchy transform

    (1/2 pi i) * integral  |x|^(2 mu) e^(-x^2) p_n(x) / (z - x)  dx

by direct panel quadrature (splitting at the ``x = 0`` kink, with a
Gauss-Jacobi panel absorbing the algebraic factor), and provides the
steepest-descent magnitude asymptotics with branch-correct auxiliary
functions ``g`` and ``a``.

The ``mu = 0`` case reduces to the classical machinery in
:mod:`hermapprox.cauchy` after monic rescaling by ``2^(-n)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import CapacityError, DomainError, QuadratureError
from .logscale import LogScaledValue
from .quad import gauss_jacobi_rule, panel_nodes

__all__ = [
    "GenHermiteParams",
    "recurrence_coefficients",
    "log_squared_norm",
    "gen_monic_eval",
    "gen_weighted_inner",
    "gen_phi",
    "gen_phi_asymptotic",
    "g_and_a",
    "g_direct",
]

_SQRT2 = math.sqrt(2.0)
_ELL = -1.0 - math.log(2.0)
_GEN_PHI_CAP = 80
_RESCALE_LIMIT = 1e250


def _check_mu(mu: float) -> float:
    mu = float(mu)
    if not math.isfinite(mu) or mu <= -0.5:
        raise DomainError(f"weight exponent must satisfy mu > -1/2, got {mu!r}")
    return mu


@dataclass(frozen=True)
class GenHermiteParams:
    """Degree and weight exponent for the ``|x|^(2 mu) e^(-x^2)`` family.

    Attributes
    ----------
    mu : float
        Weight exponent, ``mu > -1/2``.
    n : int
        Polynomial degree, ``n >= 0``.
    """

    mu: float
    n: int

    def __post_init__(self):
        _check_mu(self.mu)
        if not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise DomainError(f"degree must be a non-negative integer, got {self.n!r}")

    @property
    def effective_degree(self) -> float:
        """The shifted degree ``N = n + mu`` entering the asymptotics."""
        return self.n + self.mu

    @property
    def log_offset(self) -> float:
        """The constant ``-1 - ln 2`` of the equilibrium log-potential."""
        return _ELL


def recurrence_coefficients(n_max: int, mu: float) -> np.ndarray:
    """Monic three-term recurrence data for the generalized weight.

    The monic family satisfies ``p_{k+1}(x) = x p_k(x) - c_k p_{k-1}(x)``
    with ``c_k = k/2`` for even ``k`` and ``c_k = k/2 + mu`` for odd ``k``.
    Returns an array of length ``n_max + 1`` whose entry ``k >= 1`` is
    ``c_k``; entry 0 holds the total weight mass ``Gamma(mu + 1/2)`` (the
    squared norm of ``p_0``), so that the squared norm of ``p_n`` is the
    product of entries ``0..n``.
    """
    mu = _check_mu(mu)
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    k = np.arange(n_max + 1, dtype=float)
    c = 0.5 * k + np.where(k.astype(int) % 2 == 1, mu, 0.0)
    c[0] = math.exp(math.lgamma(mu + 0.5))
    return c


def log_squared_norm(n: int, mu: float) -> float:
    """``log`` of the weighted squared norm of the monic degree-``n`` member."""
    c = recurrence_coefficients(n, mu)
    return float(np.sum(np.log(c)))


def _monic_log(n: int, x: np.ndarray, mu: float):
    """Vectorized log-scaled evaluation of the monic degree-``n`` member.

    Returns ``(phase, log_mag)`` arrays with ``value = phase * exp(log_mag)``
    pointwise; exact zeros carry ``phase == 0`` and ``log_mag == -inf``.
    """
    x = np.asarray(x)
    if np.iscomplexobj(x):
        p_prev = np.ones(x.shape, dtype=complex)
    else:
        x = x.astype(float, copy=False)
        p_prev = np.ones(x.shape, dtype=float)
    scale = np.zeros(x.shape, dtype=float)
    if n == 0:
        p_cur = p_prev
    else:
        p_cur = x.copy()
        for k in range(1, n):
            c_k = 0.5 * k + (mu if k % 2 == 1 else 0.0)
            p_next = x * p_cur - c_k * p_prev
            p_prev, p_cur = p_cur, p_next
            mag = np.maximum(np.abs(p_cur), np.abs(p_prev))
            big = mag > _RESCALE_LIMIT
            if big.any():
                factor = np.where(big, mag, 1.0)
                p_cur = p_cur / factor
                p_prev = p_prev / factor
                scale = scale + np.where(big, np.log(factor), 0.0)
    mag = np.abs(p_cur)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_mag = np.where(mag > 0.0, np.log(np.where(mag > 0.0, mag, 1.0)) + scale, -np.inf)
        phase = np.where(mag > 0.0, p_cur / np.where(mag > 0.0, mag, 1.0), 0.0)
    return phase, log_mag


def gen_monic_eval(params: GenHermiteParams, x) -> LogScaledValue:
    """Evaluate the monic degree-``n`` polynomial at a real or complex point."""
    arr = np.asarray([x])
    phase, log_mag = _monic_log(params.n, arr, params.mu)
    if abs(phase[0]) == 0.0:
        return LogScaledValue.zero()
    p = complex(phase[0])
    if p.imag == 0.0 and not np.iscomplexobj(arr):
        return LogScaledValue(float(log_mag[0]), p.real)
    return LogScaledValue.from_log_parts(float(log_mag[0]), p)


# ---------------------------------------------------------------------------
# half-line quadrature for the kinked weight
# ---------------------------------------------------------------------------


def _halfline_nodes(mu: float, degree: int, npts: int, focus: float | None = None):
    """Nodes/weights so that ``sum w_i h(x_i) ~ int_0^X x^(2 mu) h(x) dx``.

    The first panel ``[0, b]`` uses a Gauss-Jacobi rule that integrates the
    ``x^(2 mu)`` endpoint factor exactly for any ``mu > -1/2``; the rest is
    uniform Gauss-Legendre with the factor multiplied in, with panel widths
    tuned to the oscillation scale of a degree-``degree`` member, optionally
    refined around ``focus`` (the real part of a nearby Cauchy pole).
    """
    x_max = math.sqrt(2.0 * degree + 2.0 * max(mu, 0.0) + 1.0) + 5.0
    width = min(1.0, 6.0 / math.sqrt(2.0 * degree + 1.0))
    b = min(1.0, 0.25 * x_max, width)

    t, wj = gauss_jacobi_rule(npts, 2.0 * mu)
    xj = 0.5 * b * (1.0 + t)
    wj = wj * (0.5 * b) ** (2.0 * mu + 1.0)

    edges = list(np.linspace(b, x_max, max(4, math.ceil((x_max - b) / width)) + 1))
    if focus is not None and b < focus < x_max:
        step = width / 4.0
        for j in range(-3, 4):
            e = focus + j * step
            if b + 1e-9 < e < x_max - 1e-9:
                edges.append(e)
    edges = np.unique(np.asarray(edges))
    xg, wg = panel_nodes(edges, npts)
    wg = wg * xg ** (2.0 * mu)
    return np.concatenate([xj, xg]), np.concatenate([wj, wg])


def _halfline_integral(build_h, mu, degree, *, rel_tol, focus=None, what="integral"):
    """Doubling-checked, log-scaled half-line integral of ``x^(2 mu) h(x)``.

    ``build_h(x)`` returns ``(phase, log_mag)`` of the smooth factor ``h``.
    Raises :class:`QuadratureError` when refinement stalls (under-resolution
    or cancellation beyond double precision).
    """
    results = []
    gross = 0.0
    for npts in (24, 48):
        x, w = _halfline_nodes(mu, degree, npts, focus)
        phase, log_h = build_h(x)
        log_wh = log_h + np.log(w)
        finite = np.isfinite(log_wh)
        if not finite.any():
            return 0.0j, 0.0
        m = float(np.max(log_wh[finite]))
        scaled = np.where(finite, np.exp(log_wh - m), 0.0)
        results.append(math.exp(m) * complex(np.dot(scaled, phase)))
        gross = math.exp(m) * float(np.dot(scaled, np.abs(phase)))
    coarse, fine = results
    # the 3e-13*gross floor is the node/weight noise level of the panel
    # rules; below it a doubling delta is roundoff, not signal
    if abs(fine - coarse) > rel_tol * abs(fine) + 3e-13 * gross:
        raise QuadratureError(
            f"half-line quadrature for the {what} did not converge under "
            f"doubling (|delta| = {abs(fine - coarse):.2e} against a result "
            f"of magnitude {abs(fine):.2e} and gross magnitude {gross:.2e}); "
            "this usually means cancellation beyond double precision"
        )
    return fine, gross


def gen_weighted_inner(j: int, k: int, mu: float) -> float:
    """Weighted inner product of the monic members of degrees ``j`` and ``k``."""
    mu = _check_mu(mu)
    if j < 0 or k < 0:
        raise DomainError("degrees must be non-negative")
    if (j + k) % 2 == 1:
        return 0.0  # exact: odd integrand against an even weight

    def build_h(x):
        ph_j, lg_j = _monic_log(j, x, mu)
        ph_k, lg_k = _monic_log(k, x, mu)
        return ph_j * ph_k, lg_j + lg_k - x * x

    val, _ = _halfline_integral(
        build_h, mu, j + k, rel_tol=1e-11, what=f"inner product <p_{j}, p_{k}>"
    )
    return 2.0 * val.real


def _gen_phi_upper(n: int, z: complex, mu: float) -> complex:
    sign = -1.0 if n % 2 == 1 else 1.0

    def build_h(x):
        phase, log_p = _monic_log(n, x, mu)
        kernel = 1.0 / (z - x) + sign / (z + x)
        return phase * kernel, log_p - x * x

    val, _ = _halfline_integral(
        build_h, mu, n, rel_tol=1e-9, focus=abs(z.real), what="weighted Cauchy transform"
    )
    return val / (2.0j * math.pi)


def gen_phi(params: GenHermiteParams, z) -> complex:
    """Weighted Cauchy transform of the monic degree-``n`` member at ``z``.

    Direct quadrature of the defining integral, split at the ``x = 0``
    kink of the weight; self-convergent under node doubling to relative
    1e-8.  Values for ``Im z < 0`` follow from the reflection
    ``phi(conj z) = -conj(phi(z))``.  Accuracy degrades when
    ``|Im z| sqrt(2(n + mu))`` is large (tens), because the integral then
    cancels to a value exponentially smaller than its gross magnitude.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"argument must be finite, got {z!r}")
    if z.imag == 0.0:
        raise DomainError("the weighted Cauchy transform needs Im z != 0")
    if params.n > _GEN_PHI_CAP:
        raise CapacityError(
            f"gen_phi supports n <= {_GEN_PHI_CAP}, got {params.n}; "
            "use gen_phi_asymptotic beyond"
        )
    if z.imag > 0.0:
        return _gen_phi_upper(params.n, z, params.mu)
    return -_gen_phi_upper(params.n, z.conjugate(), params.mu).conjugate()


# ---------------------------------------------------------------------------
# auxiliary functions and asymptotics
# ---------------------------------------------------------------------------


def g_and_a(z):
    """Equilibrium log-potential ``g`` and quartic-root factor ``a``.

    ``g(z) = (z^2 + ell)/2 - 2 int_1^{z/sqrt 2} sqrt(t^2 - 1) dt`` with
    ``ell = -1 - ln 2``, analytic off ``(-inf, sqrt 2]``;
    ``a(z) = ((z - sqrt 2)/(z + sqrt 2))^{1/4}`` (principal), analytic off
    ``[-sqrt 2, sqrt 2]``.  Points on either cut raise :class:`DomainError`.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"argument must be finite, got {z!r}")
    if z.imag == 0.0 and z.real <= _SQRT2:
        raise DomainError(
            "g and a are evaluated off their branch cuts; real z <= sqrt(2) is on a cut"
        )
    s = z / _SQRT2
    # sqrt(s^2 - 1) on the branch that behaves like s at infinity, cut [-1, 1]
    root = s * cmath.sqrt(1.0 - 1.0 / (s * s))
    anti = 0.5 * s * root - 0.5 * cmath.log(s + root)
    g = 0.5 * (z * z + _ELL) - 2.0 * anti
    a = ((z - _SQRT2) / (z + _SQRT2)) ** 0.25
    return g, a


def g_direct(z) -> complex:
    """``g`` by quadrature of its defining integral (validation reference).

    ``(1/pi) int_{-sqrt 2}^{sqrt 2} log(z - x) sqrt(2 - x^2) dx`` via the
    substitution ``x = sqrt(2) sin(theta)``; pointwise principal logs, which
    agree with the analytic continuation of the closed form off the cut.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= _SQRT2:
        raise DomainError("defining integral evaluated on the branch cut")
    results = []
    for npts in (48, 96):
        theta, w = panel_nodes(np.linspace(-0.5 * math.pi, 0.5 * math.pi, 9), npts)
        vals = np.log(z - _SQRT2 * np.sin(theta)) * np.cos(theta) ** 2
        results.append((2.0 / math.pi) * complex(np.dot(w, vals)))
    coarse, fine = results
    if abs(fine - coarse) > 1e-12 * max(1.0, abs(fine)):
        raise QuadratureError("log-potential quadrature did not converge under doubling")
    return fine


def gen_phi_asymptotic(params: GenHermiteParams, z, form: str = "limit") -> LogScaledValue:
    """Large-degree asymptotics of the weighted Cauchy transform.

    ``form="limit"`` returns the fixed-``z`` magnitude law (positive real):

        (1/sqrt 2) (N/2)^{N/2} e^{-N/2} |z|^mu |e^{-z^2/2}| e^{-|Im z| sqrt(2N)}

    with ``N = n + mu``, accurate to a relative ``O(N^{-1/2})``.
    ``form="rescaled"`` evaluates the full steepest-descent formula

        -(i/2) N^{(N+mu)/2} w^mu e^{N(ell - g(w))} (a(w)^{-1} - a(w)),  w = z/sqrt(N)

    as a complex log-scaled value; on compact sets of the rescaled variable
    off the real axis its relative error is ``O(N^{-1})``.  The overall sign
    goes with the defining-integral branch of ``g`` used here and was fixed
    by matching the complex ratio against the quadrature route (it converges
    to +1 across degrees, exponents and both half-planes); only the
    magnitude is certified by the test suite.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"argument must be finite, got {z!r}")
    if z.imag == 0.0:
        raise DomainError("the asymptotic forms need Im z != 0")
    n, mu = params.n, params.mu
    big_n = params.effective_degree
    if n < 1 or big_n <= 0.0:
        raise DomainError(
            f"asymptotics need n >= 1 and n + mu > 0, got n={n}, mu={mu}"
        )
    if form == "limit":
        log_mag = (
            -0.5 * math.log(2.0)
            + 0.5 * big_n * (math.log(0.5 * big_n) - 1.0)
            + mu * math.log(abs(z))
            - 0.5 * (z * z).real
            - abs(z.imag) * math.sqrt(2.0 * big_n)
        )
        return LogScaledValue(log_mag, 1.0)
    if form == "rescaled":
        w = z / math.sqrt(big_n)
        g, a = g_and_a(w)
        log_mag = (
            -math.log(2.0)
            + 0.5 * (big_n + mu) * math.log(big_n)
            + big_n * (_ELL - g.real)
            + mu * math.log(abs(w))
        )
        phase = (
            -1j
            * cmath.exp(1j * mu * cmath.phase(w))
            * cmath.exp(-1j * big_n * g.imag)
            * (1.0 / a - a)
        )
        return LogScaledValue.from_log_parts(log_mag, phase)
    raise DomainError(f"form must be 'limit' or 'rescaled', got {form!r}")
