"""Hermite-series approximation operators.

Two bases are supported throughout:

* ``"poly"``  — the Hermite polynomials H_k, orthogonal under e^{-x^2};
  a series sum c_k H_k approximates f when e^{-x^2/2} f is well-behaved.
* ``"func"``  — the orthonormal Hermite functions
  psi_k = e^{-x^2/2} H_k / sqrt(2^k k! sqrt(pi)), an L^2(R) basis.

Operators: :func:`project` (adaptive-quadrature inner products),
:func:`interpolate` (exact discrete transform on a Gauss-Hermite grid),
:func:`eval_expansion` (Clenshaw), :func:`differentiate` (exact
coefficient maps), and the contour route :func:`contour_coeff` /
:func:`contour_coeff_scaled` that recovers polynomial-basis coefficients
from an integral over a strip boundary — the workhorse for measuring
root-exponentially small coefficients far below the quadrature roundoff
floor.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .cauchy import StripContour, log_phi_scale, phi_sequence_log
from .exceptions import CapacityError, ConvergenceError, DomainError, QuadratureError, TruncationError
from .hermite import (
    gauss_hermite_rule,
    hermite_function_rows,
    log_hermite_norm_sq,
)
from .logscale import LogScaledValue
from .quad import panel_nodes
from .specfun import log_gamma

__all__ = [
    "project",
    "interpolate",
    "eval_expansion",
    "differentiate",
    "with_scaled_argument",
    "contour_coeff",
    "contour_coeff_scaled",
    "auto_coeff_contour",
    "log_coeff_normalizer",
]

_BASES = ("poly", "func")


def _check_basis(basis: str) -> str:
    if basis not in _BASES:
        raise DomainError(f"basis must be one of {_BASES}, got {basis!r}")
    return basis


def _check_degree(n: int) -> int:
    n = int(n)
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    if n > 2000:
        raise CapacityError(f"series degree {n} exceeds supported cap 2000")
    return n


def _log_norm_factor(k: np.ndarray) -> np.ndarray:
    """log sqrt(gamma_k) with gamma_k = 2^k k! sqrt(pi)."""
    return 0.5 * np.array([log_hermite_norm_sq(int(kk)) for kk in k])


def _discrete_transform(f, n: int, basis: str, rule) -> np.ndarray:
    """Coefficients of the rule-exact discrete inner products.

    func:  a_k = sum_j w_j e^{x_j^2} f(x_j) psi_k(x_j)
    poly:  c_k = gamma_k^{-1} sum_j w_j f(x_j) H_k(x_j)
               = gamma_k^{-1/2} sum_j w_j e^{x_j^2/2} f(x_j) psi_k(x_j)
    """
    x = rule.nodes
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        raise DomainError("function must evaluate elementwise on an ndarray")
    if not np.all(np.isfinite(fx)):
        raise DomainError("function evaluated to a non-finite value at a quadrature node")
    psi = hermite_function_rows(n, x)
    if basis == "func":
        return psi @ (np.exp(rule.log_weights + x * x) * fx)
    weighted = psi @ (np.exp(rule.log_weights + 0.5 * x * x) * fx)
    return weighted * np.exp(-_log_norm_factor(np.arange(n + 1)))


def project(
    f: Callable[[np.ndarray], np.ndarray],
    n: int,
    basis: str = "func",
    *,
    start_order: int | None = None,
    rel_tol: float = 1e-11,
    abs_tol: float = 1e-13,
    max_doublings: int = 5,
) -> np.ndarray:
    """Orthogonal-projection coefficients of ``f`` through degree ``n``.

    Inner products are evaluated on Gauss-Hermite rules of growing order
    until doubling the rule moves no entry by more than
    ``abs_tol + rel_tol * max_k |coeff_k|``.  The function must decay
    fast enough for the weighted integrals to exist (everything with a
    finite L^2 norm against the relevant weight qualifies).

    Caution for ``basis="poly"``: the returned coefficients carry the
    unnormalized-basis factor gamma_k^{-1/2}, which underflows double
    precision near k ~ 265 for unit-scale functions; entries beyond that
    come back as exact zeros.  High-degree coefficient studies should use
    the log-scaled contour route (:func:`contour_coeff_scaled`).
    """
    n = _check_degree(n)
    basis = _check_basis(basis)
    order = start_order if start_order is not None else max(4 * (n + 1), 160)
    order = min(order, 8000)
    prev = _discrete_transform(f, n, basis, gauss_hermite_rule(order))
    for _ in range(max_doublings):
        nxt = min(order * 2, 8000)
        if nxt == order:
            raise CapacityError(
                "projection inner products did not settle within the "
                "order-8000 quadrature cap"
            )
        cur = _discrete_transform(f, n, basis, gauss_hermite_rule(nxt))
        tol = abs_tol + rel_tol * float(np.max(np.abs(cur)))
        if float(np.max(np.abs(cur - prev))) <= tol:
            return cur
        prev, order = cur, nxt
    raise ConvergenceError(
        f"projection inner products did not settle after {max_doublings} rule doublings"
    )


def interpolate(f: Callable[[np.ndarray], np.ndarray], n: int, basis: str = "func") -> np.ndarray:
    """Coefficients of the degree-n interpolant on the (n+1)-point
    Gauss-Hermite grid.

    The discrete transform on that grid is exact for the span of the
    first n+1 basis elements (the rule integrates products of degree up
    to 2n+1), so the returned series matches ``f`` at every node.
    Differs from :func:`project` by aliasing of the truncated tail.
    """
    n = _check_degree(n)
    basis = _check_basis(basis)
    return _discrete_transform(f, n, basis, gauss_hermite_rule(n))


def eval_expansion(coeffs: Sequence[float], x, basis: str = "poly"):
    """Clenshaw evaluation of sum_k coeffs[k] * basis_k(x).

    Accepts scalars or ndarrays of evaluation points; complex points are
    allowed for the polynomial basis.
    """
    basis = _check_basis(basis)
    c = np.asarray(coeffs)
    if c.ndim != 1 or c.size == 0:
        raise DomainError("coefficients must form a nonempty 1-d sequence")
    xs = np.asarray(x)
    scalar = xs.ndim == 0
    xs = np.atleast_1d(xs)
    if basis == "poly":
        b1 = np.zeros(xs.shape, dtype=np.result_type(c.dtype, xs.dtype))
        b2 = np.zeros_like(b1)
        for k in range(c.size - 1, -1, -1):
            b1, b2 = c[k] + 2.0 * xs * b1 - 2.0 * (k + 1) * b2, b1
        out = b1
    else:
        if np.iscomplexobj(xs):
            raise DomainError("the orthonormal-function basis is evaluated on the real line")
        xf = xs.astype(float, copy=False)
        # Forward sweep directly in the weighted basis: each member is
        # bounded by ~0.82 on the real line, so unlike an unweighted
        # Clenshaw pass this cannot overflow beyond the turning points.
        # Values whose true size is below the double-precision tail
        # underflow cleanly to zero.
        p0 = (math.pi ** -0.25) * np.exp(-0.5 * xf * xf)
        out = c[0] * p0
        if c.size > 1:
            p1 = math.sqrt(2.0) * xf * p0
            out = out + c[1] * p1
            for k in range(1, c.size - 1):
                p0, p1 = p1, math.sqrt(2.0 / (k + 1)) * xf * p1 - math.sqrt(k / (k + 1.0)) * p0
                out += c[k + 1] * p1
        out = np.asarray(out)
    return out[0] if scalar else out


def differentiate(coeffs: Sequence[float], m: int = 1, basis: str = "poly") -> np.ndarray:
    """Coefficients of the m-th derivative of a Hermite series.

    Exact coefficient maps: H_k' = 2k H_{k-1} shortens a polynomial-basis
    series; psi_k' = sqrt(k/2) psi_{k-1} - sqrt((k+1)/2) psi_{k+1}
    lengthens an orthonormal-function series by one per derivative.
    """
    basis = _check_basis(basis)
    if m < 0:
        raise DomainError(f"derivative order must be >= 0, got {m}")
    if m > 8:
        raise CapacityError(f"derivative order {m} exceeds supported cap 8")
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise DomainError("coefficients must form a nonempty 1-d sequence")
    for _ in range(m):
        if basis == "poly":
            if c.size == 1:
                c = np.zeros(1)
                continue
            k = np.arange(1, c.size)
            c = 2.0 * k * c[1:]
        else:
            out = np.zeros(c.size + 1)
            j = np.arange(c.size - 1)
            out[:-2] += np.sqrt((j + 1) / 2.0) * c[1:]
            j = np.arange(1, c.size + 1)
            out[1:] -= np.sqrt(j / 2.0) * c
            c = out
    return c


def with_scaled_argument(f: Callable, lam: float) -> Callable:
    """g with g(x) = f(x / lam): expanding g in the orthonormal basis is
    the same as expanding f in the argument-scaled basis psi_k(lam x)."""
    if not (lam > 0 and math.isfinite(lam)):
        raise DomainError(f"scale factor must be positive and finite, got {lam!r}")
    return lambda x: f(np.asarray(x) / lam)


# ---------------------------------------------------------------------------
# contour route for polynomial-basis coefficients
# ---------------------------------------------------------------------------


def log_coeff_normalizer(n: int) -> float:
    """log(2^n Gamma((n+1)/2) sqrt(2 pi (n+1))).

    The scaled coefficient  c~_n = c_n * 2^n Gamma((n+1)/2) sqrt(2 pi (n+1))
    is the quantity with the clean root-exponential envelope
    |c~_n| <= V e^{-rho sqrt(2(n+1))}; this returns the log of the
    conversion factor.
    """
    return n * math.log(2.0) + log_gamma((n + 1.0) / 2.0) + 0.5 * (
        math.log(2.0 * math.pi) + math.log(n + 1.0)
    )


def auto_coeff_contour(
    rho: float,
    n_min: int,
    *,
    sigma: float = 0.0,
    drop: float = 45.0,
    feature_scale: float = 0.5,
    points_per_panel: int = 16,
) -> StripContour:
    """Strip contour sized for coefficient recovery at degrees >= n_min.

    The integrand envelope on the boundary line Im z = rho combines an
    interior regime  e^{(rho^2 - x^2)/2 - rho sqrt(2(n+1))}  and an
    algebraic far regime  ~ n! / (s_n |x|^{n+1})  (the transform decays
    only algebraically); ``sigma`` is an algebraic growth bound on the
    target function along the line (f = O(|x|^sigma)).  The half-width is
    the first point where both regime estimates sit ``drop`` e-foldings
    under the peak; panels are geometrically graded from
    ``feature_scale`` near the origin (set it to the distance between the
    contour and the nearest singularity when that gap is small).
    """
    if not (rho > 0 and math.isfinite(rho)):
        raise DomainError(f"strip half-height must be positive, got {rho!r}")
    n = max(int(n_min), 0)
    peak = 0.5 * rho * rho - rho * math.sqrt(2.0 * (n + 1.0))
    log_outer_num = log_gamma(n + 1.0) - math.log(2.0 * math.sqrt(math.pi)) - log_phi_scale(n)

    def envelope(x: float) -> float:
        inner = 0.5 * rho * rho - 0.5 * x * x - rho * math.sqrt(2.0 * (n + 1.0))
        outer = log_outer_num - (n + 1.0) * math.log(x)
        return max(inner, outer) + max(sigma, 0.0) * math.log(max(x, 1.0)) + min(sigma, 0.0) * math.log(x)

    x = max(2.0 * feature_scale, 2.0)
    while envelope(x) > peak - drop:
        x *= 1.25
        if x > 1e308 / 2:
            raise CapacityError("could not close the contour tail; integrand decays too slowly")
    per_side = int(math.ceil(math.log(x / feature_scale) / math.log(1.45))) + 4
    per_side = min(max(per_side, 10), 90)
    return StripContour.graded(rho, x, feature_scale, panels=2 * per_side, points_per_panel=points_per_panel)


def _batch_contour_values(f, n_max: int, contour: StripContour, pts: int):
    """Scaled-transform integrand rows at one panel resolution.

    Returns (weights, values) with values[k, j] =
    (Phi_k/s_k)(lower_j) f(lower_j) - (Phi_k/s_k)(upper_j) f(upper_j).
    """
    x, w = panel_nodes(contour.breaks, pts)
    z_lo = x - 1j * contour.rho
    z_up = x + 1j * contour.rho
    zs = np.concatenate([z_lo, z_up])
    log_mag, phase = phi_sequence_log(n_max, zs)
    scales = np.array([log_phi_scale(k) for k in range(n_max + 1)])
    rows = phase * np.exp(log_mag - scales[:, None])
    fv = np.asarray(f(zs))
    if not np.all(np.isfinite(fv)):
        raise QuadratureError("function evaluated to a non-finite value on the contour")
    m = x.size
    vals = rows[:, :m] * fv[None, :m] - rows[:, m:] * fv[None, m:]
    return w, vals


def contour_coeff_scaled(
    f: Callable[[np.ndarray], np.ndarray],
    ns: Sequence[int],
    rho: float,
    *,
    contour: StripContour | None = None,
    sigma: float = 0.0,
    feature_scale: float = 0.5,
    rel_tol: float = 1e-9,
    tail_tol: float = 1e-9,
) -> np.ndarray:
    """Scaled polynomial-basis coefficients c~_n by boundary integration.

    c~_n := c_n 2^n Gamma((n+1)/2) sqrt(2 pi (n+1)) equals the
    counterclockwise integral of (Phi_n/s_n) f over the strip boundary
    exactly — the normalizing constants cancel — and stays O(V), so the
    whole computation lives in ordinary doubles no matter how large n
    gets.  ``f`` must be analytic on the closed strip |Im z| <= rho and
    integrable along its boundary.

    Each requested degree gets the doubling and tail checks of
    :func:`strip_boundary_integral` (same semantics, shared transforms).
    """
    ns = [int(v) for v in ns]
    if not ns:
        return np.zeros(0, dtype=complex)
    if min(ns) < 0:
        raise DomainError("degrees must be >= 0")
    n_max = max(ns)
    if n_max > 400:
        raise CapacityError(f"contour coefficients support degrees <= 400, got {n_max}")
    if contour is None:
        contour = auto_coeff_contour(rho, min(ns), sigma=sigma, feature_scale=feature_scale)
    w1, v1 = _batch_contour_values(f, n_max, contour, contour.points_per_panel)
    w2, v2 = _batch_contour_values(f, n_max, contour, 2 * contour.points_per_panel)
    out = np.zeros(len(ns), dtype=complex)
    for i, n in enumerate(ns):
        coarse = complex(np.dot(w1, v1[n]))
        fine = complex(np.dot(w2, v2[n]))
        contrib = (w2 * v2[n]).reshape(contour.panels, -1)
        per_panel = np.abs(contrib.sum(axis=1))
        scale = max(abs(fine), float(np.max(per_panel)))
        if abs(fine - coarse) > rel_tol * scale + 1e-300:
            raise QuadratureError(
                f"contour coefficient degree {n}: doubling check failed "
                f"(|delta| = {abs(fine - coarse):.3e}, scale = {scale:.3e})"
            )
        tail = 0.0
        for last, prev in ((per_panel[-1], per_panel[-2]), (per_panel[0], per_panel[1])):
            if last > 0.0:
                r = min(last / max(prev, 1e-300), 0.9)
                tail += last * r / (1.0 - r)
        if tail > tail_tol * scale and tail > 1e-305:
            raise TruncationError(
                f"contour coefficient degree {n}: tail estimate {tail:.3e} "
                f"exceeds budget ({tail_tol:.1e} of scale {scale:.3e})",
                tail,
                scale,
            )
        out[i] = fine
    return out


def contour_coeff(
    f: Callable[[np.ndarray], np.ndarray],
    n: int,
    rho: float,
    **kwargs,
) -> complex:
    """Polynomial-basis coefficient c_n by boundary integration.

    Materialized from the scaled value; degrees much above ~300 underflow
    doubles (use :func:`contour_coeff_scaled` with
    :func:`log_coeff_normalizer` then).
    """
    scaled = contour_coeff_scaled(f, [n], rho, **kwargs)[0]
    if scaled == 0:
        return 0.0j
    lv = LogScaledValue.from_value(scaled).scale_exp(-log_coeff_normalizer(n))
    return complex(lv.materialize())
