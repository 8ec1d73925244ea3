"""Hermite polynomials, Hermite functions, and Gauss-Hermite rules.

Conventions (physicists'):

    H_{n+1}(x) = 2 x H_n(x) - 2 n H_{n-1}(x),      H_0 = 1, H_1 = 2x,
    gamma_n    = int H_n^2 e^{-x^2} dx = 2^n n! sqrt(pi),
    psi_n(x)   = e^{-x^2/2} H_n(x) / sqrt(gamma_n)   (orthonormal in L^2(R)).

All recurrences carry a running exponent offset so that nothing overflows or
underflows prematurely: the Gaussian prefactor alone kills doubles for
|x| > 38, while H_n grows like 2^n sqrt(n!).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .exceptions import CapacityError, ConvergenceError, DomainError
from .logscale import LogScaledValue
from .specfun import log_gamma

__all__ = [
    "GaussHermiteRule",
    "hermite_poly",
    "hermite_function",
    "hermite_function_derivative",
    "gauss_hermite_rule",
    "log_hermite_norm_sq",
    "hermite_function_rows",
]

_PI_QUARTER = math.pi**-0.25
_MAX_DEGREE = 10**6
_MAX_ABS_X = 1.0e3
_RESCALE_HI = 1e250
_RESCALE_LO = 1e-250


def log_hermite_norm_sq(n: int) -> float:
    """log gamma_n = log(2^n n! sqrt(pi)), the squared weighted norm of H_n."""
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    return n * math.log(2.0) + log_gamma(n + 1.0) + 0.5 * math.log(math.pi)


def _check_degree(n: int, cap: int = _MAX_DEGREE) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise DomainError(f"degree must be an integer, got {n!r}")
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    if n > cap:
        raise CapacityError(f"degree {n} exceeds supported cap {cap}")
    return int(n)


# ---------------------------------------------------------------------------
# Hermite polynomial (log-scaled, real or complex argument)
# ---------------------------------------------------------------------------


def hermite_poly(n: int, x: complex) -> LogScaledValue:
    """H_n(x) as a log-scaled value; ``x`` may be real or complex."""
    n = _check_degree(n)
    is_real = not isinstance(x, complex)
    xc = complex(x)
    if not (math.isfinite(xc.real) and math.isfinite(xc.imag)):
        raise DomainError(f"hermite_poly requires finite x, got {x!r}")

    def pack(value: complex, offset: float) -> LogScaledValue:
        mag = abs(value)
        if mag == 0.0:
            return LogScaledValue.zero()
        if is_real:
            return LogScaledValue(math.log(mag) + offset, 1.0 if value.real > 0 else -1.0)
        return LogScaledValue(math.log(mag) + offset, value / mag)

    if n == 0:
        return pack(1.0 + 0.0j, 0.0)
    h_prev, h_cur = 1.0 + 0.0j, 2.0 * xc
    offset = 0.0
    for k in range(1, n):
        h_prev, h_cur = h_cur, 2.0 * xc * h_cur - 2.0 * k * h_prev
        m = max(abs(h_prev), abs(h_cur))
        if m > _RESCALE_HI or (0.0 < m < _RESCALE_LO):
            h_prev /= m
            h_cur /= m
            offset += math.log(m)
    return pack(h_cur, offset)


def hermite_poly_log_rows(n_max: int, z: np.ndarray):
    """log|H_k(z)| and phases for k = 0..n_max at an array of points.

    Returns ``(log_mag, phase)`` arrays of shape ``(n_max+1, len(z))``; the
    phase rows are unit-modulus (or 0 where H_k(z) == 0 exactly).
    """
    z = np.asarray(z, dtype=complex)
    npts = z.size
    log_mag = np.full((n_max + 1, npts), -np.inf)
    phase = np.zeros((n_max + 1, npts), dtype=complex)
    h_prev = np.ones(npts, dtype=complex)
    h_cur = 2.0 * z
    offset = np.zeros(npts)

    def store(k, vals):
        mag = np.abs(vals)
        nz = mag > 0.0
        log_mag[k, nz] = np.log(mag[nz]) + offset[nz]
        phase[k, nz] = vals[nz] / mag[nz]

    store(0, h_prev)
    if n_max >= 1:
        store(1, h_cur)
    for k in range(1, n_max):
        h_prev, h_cur = h_cur, 2.0 * z * h_cur - 2.0 * k * h_prev
        m = np.maximum(np.abs(h_prev), np.abs(h_cur))
        big = (m > _RESCALE_HI) | ((m > 0.0) & (m < _RESCALE_LO))
        if np.any(big):
            scale = np.where(big, m, 1.0)
            h_prev = h_prev / scale
            h_cur = h_cur / scale
            offset = offset + np.where(big, np.log(scale), 0.0)
        store(k + 1, h_cur)
    return log_mag, phase


# ---------------------------------------------------------------------------
# Hermite functions (orthonormal)
# ---------------------------------------------------------------------------


def _psi_scaled_triple(n: int, x: np.ndarray):
    """Scaled (psi_n, psi_{n+1}, psi_{n+2}) at array ``x``.

    Returns ``(s_n, s_n1, s_n2, offset)`` with psi_k = s_k * exp(offset)
    per point.  Used by the Newton polish, which only needs ratios.
    """
    x = np.asarray(x, dtype=float)
    offset = -0.5 * x * x + math.log(_PI_QUARTER)
    s_prev = np.ones_like(x)  # psi_0 scaled
    s_cur = math.sqrt(2.0) * x  # psi_1 scaled by same offset
    if n == 0:
        pass
    else:
        for k in range(1, n + 1):
            s_prev, s_cur = s_cur, math.sqrt(2.0 / (k + 1)) * x * s_cur - math.sqrt(
                k / (k + 1.0)
            ) * s_prev
            m = np.maximum(np.abs(s_prev), np.abs(s_cur))
            bad = (m > _RESCALE_HI) | ((m > 0.0) & (m < _RESCALE_LO))
            if np.any(bad):
                scale = np.where(bad, m, 1.0)
                s_prev = s_prev / scale
                s_cur = s_cur / scale
                offset = offset + np.where(bad, np.log(scale), 0.0)
    # now s_prev = psi_n, s_cur = psi_{n+1}
    k = n + 1
    s_next = np.sqrt(2.0 / (k + 1)) * x * s_cur - math.sqrt(k / (k + 1.0)) * s_prev
    return s_prev, s_cur, s_next, offset


def hermite_function(n: int, x: float) -> float:
    """Orthonormal Hermite function psi_n(x) = e^{-x^2/2} H_n(x)/sqrt(gamma_n).

    Never overflows for n <= 1e6, |x| <= 1e3; values below the double range
    underflow cleanly to 0.
    """
    n = _check_degree(n)
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"hermite_function requires finite x, got {x!r}")
    if abs(x) > _MAX_ABS_X:
        raise CapacityError(f"|x| = {abs(x)} exceeds supported range {_MAX_ABS_X}")
    offset = -0.5 * x * x + math.log(_PI_QUARTER)
    if n == 0:
        return math.exp(offset) if offset > -745.0 else 0.0
    s_prev, s_cur = 1.0, math.sqrt(2.0) * x
    for k in range(1, n):
        s_prev, s_cur = s_cur, math.sqrt(2.0 / (k + 1)) * x * s_cur - math.sqrt(
            k / (k + 1.0)
        ) * s_prev
        m = max(abs(s_prev), abs(s_cur))
        if m > _RESCALE_HI or 0.0 < m < _RESCALE_LO:
            s_prev /= m
            s_cur /= m
            offset += math.log(m)
    if s_cur == 0.0:
        return 0.0
    log_val = math.log(abs(s_cur)) + offset
    if log_val < -745.0:
        return 0.0
    return math.copysign(math.exp(log_val), s_cur)


def hermite_function_rows(n_max: int, x: np.ndarray) -> np.ndarray:
    """Matrix psi_k(x_j), k = 0..n_max, as plain floats (underflow -> 0).

    The scaled recurrence keeps interior accuracy even when the Gaussian
    start underflows; rows are materialized per point.
    """
    n_max = _check_degree(n_max)
    x = np.asarray(x, dtype=float)
    rows = np.zeros((n_max + 1, x.size))
    offset = -0.5 * x * x + math.log(_PI_QUARTER)
    s_prev = np.ones_like(x)
    s_cur = math.sqrt(2.0) * x

    def materialize(s):
        with np.errstate(divide="ignore"):
            lv = np.where(s != 0.0, np.log(np.abs(np.where(s != 0.0, s, 1.0))) + offset, -np.inf)
        out = np.where(lv > -745.0, np.sign(s) * np.exp(np.maximum(lv, -745.0)), 0.0)
        return out

    rows[0] = materialize(s_prev)
    if n_max >= 1:
        rows[1] = materialize(s_cur)
    for k in range(1, n_max):
        s_prev, s_cur = s_cur, np.sqrt(2.0 / (k + 1)) * x * s_cur - math.sqrt(
            k / (k + 1.0)
        ) * s_prev
        m = np.maximum(np.abs(s_prev), np.abs(s_cur))
        bad = (m > _RESCALE_HI) | ((m > 0.0) & (m < _RESCALE_LO))
        if np.any(bad):
            scale = np.where(bad, m, 1.0)
            s_prev = s_prev / scale
            s_cur = s_cur / scale
            offset = offset + np.where(bad, np.log(scale), 0.0)
        rows[k + 1] = materialize(s_cur)
    return rows


def hermite_function_derivative(n: int, m: int, x: float) -> float:
    """m-th derivative of psi_n at x via the ladder relation applied m times.

    psi_k' = sqrt(k/2) psi_{k-1} - sqrt((k+1)/2) psi_{k+1}, so each
    application maps a coefficient vector on {psi_j} to one two longer.
    """
    n = _check_degree(n)
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool) or m < 0:
        raise DomainError(f"derivative order must be an integer >= 0, got {m!r}")
    if m > 8:
        raise CapacityError(f"derivative order {m} exceeds supported cap 8")
    coeff = np.zeros(n + m + 1)
    coeff[n] = 1.0
    top = n
    for _ in range(m):
        new = np.zeros_like(coeff)
        for j in range(top + 2):
            acc = 0.0
            if j + 1 <= top:
                acc += math.sqrt((j + 1) / 2.0) * coeff[j + 1]
            if j - 1 >= 0 and j - 1 <= top:
                acc -= math.sqrt(j / 2.0) * coeff[j - 1]
            new[j] = acc
        coeff = new
        top += 1
    rows = hermite_function_rows(top, np.array([float(x)]))
    return float(np.dot(coeff[: top + 1], rows[:, 0]))


# ---------------------------------------------------------------------------
# Gauss-Hermite rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussHermiteRule:
    """(n+1)-point Gauss-Hermite rule: sum w_k f(x_k) ~ int f e^{-x^2} dx.

    ``log_weights`` are exact logs of the weights (outer weights underflow
    as plain doubles for large rules); ``modified_weights`` are
    w_k e^{x_k^2}, the bounded factors used to integrate plain (already
    weighted) integrands.
    """

    order: int
    nodes: np.ndarray
    weights: np.ndarray
    log_weights: np.ndarray
    modified_weights: np.ndarray

    def __post_init__(self):
        for arr in (self.nodes, self.weights, self.log_weights, self.modified_weights):
            arr.setflags(write=False)

    @property
    def size(self) -> int:
        return self.nodes.size

    def integrate_weighted(self, values: np.ndarray) -> float:
        """sum w_k values_k  ~  int f e^{-x^2} dx given values_k = f(x_k)."""
        return float(np.dot(self.weights, np.asarray(values)))

    def integrate_lebesgue(self, values: np.ndarray) -> float:
        """sum w_k e^{x_k^2} values_k  ~  int g(x) dx for decaying g."""
        return float(np.dot(self.modified_weights, np.asarray(values)))


@lru_cache(maxsize=128)
def gauss_hermite_rule(n: int) -> GaussHermiteRule:
    """Build the (n+1)-point Gauss-Hermite rule (nodes = zeros of H_{n+1}).

    Initial nodes are eigenvalues of the Jacobi matrix; each is polished by
    Newton iteration on psi_{n+1} (stopping when the residual passes
    1e-13), and the rule is symmetrized.  Weights come from
    w_k = e^{-x_k^2} / ((n+1) psi_n(x_k)^2).
    """
    n = _check_degree(n, cap=8000)
    if n == 0:
        nodes = np.array([0.0])
        weights = np.array([math.sqrt(math.pi)])
        log_w = np.log(weights)
        return GaussHermiteRule(0, nodes, weights, log_w, weights.copy())

    diag = np.zeros(n + 1)
    off = np.sqrt(np.arange(1, n + 1) / 2.0)
    nodes = eigh_tridiagonal(diag, off, eigvals_only=True)

    for _ in range(4):
        s_n, s_n1, s_n2, _ = _psi_scaled_triple(n, nodes)
        deriv = math.sqrt((n + 1) / 2.0) * s_n - math.sqrt((n + 2) / 2.0) * s_n2
        step = s_n1 / deriv
        nodes = nodes - step
        if np.max(np.abs(step)) < 1e-15:
            break

    # enforce exact symmetry x_k = -x_{n-k}
    nodes = 0.5 * (nodes - nodes[::-1])
    if (n + 1) % 2 == 1:
        nodes[n // 2] = 0.0

    s_n, s_n1, _, offset = _psi_scaled_triple(n, nodes)
    with np.errstate(divide="ignore"):
        log_abs_psi_n = np.log(np.abs(s_n)) + offset
    residual = np.abs(s_n1) * np.exp(np.clip(offset, -745.0, 0.0))
    if np.max(residual) > 1e-13:
        raise ConvergenceError(
            f"gauss_hermite_rule({n}): node residual {np.max(residual):.3e} > 1e-13"
        )

    log_weights = -nodes**2 - math.log(n + 1.0) - 2.0 * log_abs_psi_n
    log_weights = 0.5 * (log_weights + log_weights[::-1])  # symmetrize exactly
    weights = np.where(log_weights > -745.0, np.exp(np.maximum(log_weights, -745.0)), 0.0)
    modified = np.exp(log_weights + nodes**2)

    total = float(weights.sum())
    if not math.isclose(total, math.sqrt(math.pi), rel_tol=1e-13):
        raise ConvergenceError(
            f"gauss_hermite_rule({n}): weight sum {total!r} != sqrt(pi)"
        )
    return GaussHermiteRule(n, nodes, weights, log_weights, modified)
