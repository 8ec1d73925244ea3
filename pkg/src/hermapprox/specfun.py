"""From-scratch special functions: log-gamma, Faddeeva, Kummer U(a, 1/2, x).

These three underpin everything else in the library:

* ``log_gamma`` feeds the normalization constants gamma_n = 2^n n! sqrt(pi)
  and every structural prefactor that would overflow doubles,
* ``faddeeva`` w(z) = exp(-z^2) erfc(-iz) seeds the weighted Cauchy
  transform on the Gaussian weight,
* ``kummer_u_half`` U(a, 1/2, x) gives closed forms for the transform on the
  imaginary axis and for the coefficients of 1/(x^2 + tau^2).

No scipy.special is used here; methods are Stirling series with argument
shift, a Weideman-style rational approximation, and a log-space Laplace
integral.
"""

from __future__ import annotations

import math

import numpy as np

from .exceptions import DomainError, QuadratureError
from .logscale import LogScaledValue
from .quad import geometric_breaks, leggauss_cached, logsum_quadrature

__all__ = ["log_gamma", "faddeeva", "kummer_u_half"]

_LOG_2PI = math.log(2.0 * math.pi)

# Stirling series coefficients B_{2k} / (2k (2k-1)) for k = 1..8.
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    7.0 / 1092.0,
    -3617.0 / 122400.0,
)


def log_gamma(x: float) -> float:
    """Natural log of the Gamma function for real ``x > 0``.

    Stirling's series at ``y >= 10`` with the recurrence
    ``Gamma(x) = Gamma(x+n) / (x (x+1) ... (x+n-1))`` used to shift small
    arguments up.  Absolute error ~1e-15, so ``exp(log_gamma(x))`` matches
    Gamma(x) to ~1e-13 relative over (0, 170].
    """
    if not (isinstance(x, (int, float)) and not isinstance(x, bool)):
        raise DomainError(f"log_gamma expects a real number, got {x!r}")
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")

    shift = 0.0
    y = x
    while y < 10.0:
        shift += math.log(y)
        y += 1.0
    s = (y - 0.5) * math.log(y) - y + 0.5 * _LOG_2PI
    yk = y
    y2 = y * y
    for c in _STIRLING:
        s += c / yk
        yk *= y2
    return s - shift


# ---------------------------------------------------------------------------
# Faddeeva function
# ---------------------------------------------------------------------------


def _weideman_coefficients(n_terms: int):
    """Polynomial coefficients of the rational Faddeeva approximation.

    The construction samples exp(-t^2)(L^2 + t^2) on a tangent grid and
    takes a real FFT; the resulting degree-``n_terms`` polynomial in
    (L+iz)/(L-iz) approximates w(z) uniformly on the closed upper
    half-plane.
    """
    big_m = 2 * n_terms
    k = np.arange(-big_m + 1, big_m)
    length = math.sqrt(n_terms / math.sqrt(2.0))
    theta = k * np.pi / big_m
    t = length * np.tan(theta / 2.0)
    f = np.exp(-(t**2)) * (length**2 + t**2)
    f = np.concatenate(([0.0], f))
    a = np.real(np.fft.fft(np.fft.fftshift(f))) / (2 * big_m)
    return length, a[1 : n_terms + 1][::-1].copy()


_WEIDEMAN_L, _WEIDEMAN_A = _weideman_coefficients(48)
_INV_SQRT_PI = 1.0 / math.sqrt(math.pi)


def faddeeva_many(z: np.ndarray) -> np.ndarray:
    """Vectorized w(z) on the closed upper half-plane (no domain checks)."""
    z = np.asarray(z, dtype=complex)
    iz = 1j * z
    zz = (_WEIDEMAN_L + iz) / (_WEIDEMAN_L - iz)
    p = np.polyval(_WEIDEMAN_A, zz)
    return 2.0 * p / (_WEIDEMAN_L - iz) ** 2 + _INV_SQRT_PI / (_WEIDEMAN_L - iz)


def faddeeva(z: complex) -> complex:
    """Faddeeva function w(z) = exp(-z^2) erfc(-iz) for ``Im z >= 0``.

    Relative accuracy ~1e-14 uniformly on the closed upper half-plane
    (measured against high-precision references out to |z| = 1000).
    The lower half-plane is rejected; callers there should apply the
    reflection w(-z) = 2 exp(-z^2) - w(z) themselves with care.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"faddeeva requires a finite argument, got {z!r}")
    if z.imag < 0.0:
        raise DomainError(f"faddeeva requires Im z >= 0, got Im z = {z.imag!r}")
    return complex(faddeeva_many(np.array([z]))[0])


# ---------------------------------------------------------------------------
# Kummer U(a, 1/2, x)
# ---------------------------------------------------------------------------


def _u_half_log_integrand(t: np.ndarray, a: float, x: float) -> np.ndarray:
    """log of e^{-xt} t^{a-1} (1+t)^{-a-1/2}, with t=0 handled."""
    with np.errstate(divide="ignore"):
        return -x * t + (a - 1.0) * np.log(t) - (a + 0.5) * np.log1p(t)


def _u_half_quadrature(a: float, x: float, npts: int) -> tuple[float, float]:
    """Laplace integral for Gamma(a) U(a,1/2,x) as (log_mag, scaled_sum)."""
    # Stationary point of the log-integrand (only exists for a > 1).
    if a > 1.0:
        t_peak = (-(x + 1.5) + math.sqrt((x + 1.5) ** 2 + 4.0 * x * (a - 1.0))) / (
            2.0 * x
        )
    else:
        t_peak = 0.0
    t_ref = max(t_peak, 1.0 / (x + 1.5))
    phi_ref = float(_u_half_log_integrand(np.array([max(t_ref, 1e-300)]), a, x)[0])

    # Upper cutoff: walk outward until the integrand has dropped 70 e-foldings.
    t_hi = t_ref
    for _ in range(200):
        t_hi *= 2.0
        if _u_half_log_integrand(np.array([t_hi]), a, x)[0] < phi_ref - 70.0:
            break
    else:
        raise QuadratureError("kummer_u_half: no decaying tail found")

    # Geometric panels down 18 orders of magnitude below the cutoff, plus a
    # power-substituted panel [0, t_lo] that absorbs the t^{a-1} endpoint
    # behaviour when a < 5.
    breaks = geometric_breaks(t_hi * 2.0**-60, t_hi, ratio=2.0)
    t_lo = breaks[0]
    xg, wg = leggauss_cached(npts)

    logs = []
    weights = []
    # interior geometric panels
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        half = 0.5 * (hi - lo)
        t = 0.5 * (hi + lo) + half * xg
        logs.append(_u_half_log_integrand(t, a, x))
        weights.append(half * wg)
    # endpoint panel with substitution t = t_lo * u^p
    p = 1 if a >= 5.0 else min(40, math.ceil(5.0 / min(a, 1.0)) if a < 1.0 else math.ceil(5.0 / a))
    p = max(p, 1)
    u = 0.5 + 0.5 * xg  # u in (0, 1)
    uw = 0.5 * wg
    t = t_lo * u**p
    jac = np.log(t_lo * p) + (p - 1) * np.log(u)
    logs.append(_u_half_log_integrand(t, a, x) + jac)
    weights.append(uw)

    return logsum_quadrature(np.concatenate(logs), np.concatenate(weights))


def kummer_u_half(a: float, x: float) -> LogScaledValue:
    """Kummer U(a, 1/2, x) for ``a > 0``, ``x > 0`` as a log-scaled value.

    Evaluated from the Laplace integral

        U(a, 1/2, x) = (1/Gamma(a)) int_0^inf e^{-xt} t^{a-1} (1+t)^{-a-1/2} dt

    with log-space panel quadrature; a point-count doubling must agree to
    1e-11 relative or a :class:`QuadratureError` is raised.  Relative
    accuracy ~1e-12 across a <= 60, x in [0.01, 100] (checked against
    erfc identities and the x^{-a} asymptote).
    """
    a = float(a)
    x = float(x)
    if not (math.isfinite(a) and a > 0.0):
        raise DomainError(f"kummer_u_half requires a > 0, got {a!r}")
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"kummer_u_half requires x > 0, got {x!r}")

    log1, s1 = _u_half_quadrature(a, x, 32)
    log2, s2 = _u_half_quadrature(a, x, 64)
    v1 = log1 + math.log(s1) if s1 > 0 else -math.inf
    v2 = log2 + math.log(s2) if s2 > 0 else -math.inf
    if not (math.isfinite(v1) and math.isfinite(v2)):
        raise QuadratureError(f"kummer_u_half({a}, {x}): integral evaluated to zero")
    if abs(v1 - v2) > 1e-11:
        raise QuadratureError(
            f"kummer_u_half({a}, {x}): doubling check failed "
            f"(log values {v1:.15g} vs {v2:.15g})"
        )
    return LogScaledValue(v2 - log_gamma(a), 1.0)
