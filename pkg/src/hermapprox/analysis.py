"""Error measurement, certified decay bounds, and rate fitting.

For a function analytic on the closed strip |Im z| <= rho, truncated
Hermite approximations converge root-exponentially: errors decay like
n^p e^{-rho sqrt(2n)} with a kind-specific algebraic power p and an
explicit prefactor proportional to a boundary volume

    V     = int |e^{-z^2/2} f(z)| |dz|   (half-Gaussian weight),
    V^    = int |f(z)| |dz|              (no weight),
    V_q   = int |e^{-z^2} f(z)| |dz|     (full Gaussian weight),

all taken over both boundary lines of the strip.  This module computes
the volumes, evaluates the certified bound for each approximation kind,
measures actual errors (weighted L^2 and sup norms), fits decay rates,
and certifies measured-vs-bound with an explicit slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .approx import auto_coeff_contour, eval_expansion, log_coeff_normalizer
from .cauchy import StripContour, phi_sequence_log, strip_boundary_integral
from .exceptions import DomainError, FitError, QuadratureError
from .hermite import gauss_hermite_rule, hermite_poly_log_rows, log_hermite_norm_sq
from .quad import panel_nodes

__all__ = [
    "boundary_volume",
    "bound",
    "bound_log",
    "BOUND_KINDS",
    "DecayFit",
    "fit_decay",
    "weighted_l2_error",
    "max_error",
    "gh_quadrature_error",
    "gh_error_contour",
    "BoundCheck",
    "certify_bound",
]


# ---------------------------------------------------------------------------
# boundary volumes
# ---------------------------------------------------------------------------

_WEIGHTS = ("half-gaussian", "none", "full-gaussian")


def boundary_volume(
    f: Callable[[np.ndarray], np.ndarray],
    rho: float,
    weight: str = "half-gaussian",
    *,
    half_width: float | None = None,
    feature_scale: float = 0.5,
    rel_tol: float = 1e-8,
) -> float:
    """int |w(z) f(z)| |dz| over both boundary lines of the strip.

    ``weight`` selects w: "half-gaussian" (e^{-z^2/2}), "none" (1) or
    "full-gaussian" (e^{-z^2}).  ``f`` must be defined on the two lines
    and make the integral finite — the unweighted volume diverges for
    functions with less than ~|x|^{-1-eps} decay, which surfaces as a
    failed doubling/tail check here, not silently.
    """
    if weight not in _WEIGHTS:
        raise DomainError(f"weight must be one of {_WEIGHTS}, got {weight!r}")
    if not (rho > 0 and math.isfinite(rho)):
        raise DomainError(f"strip half-height must be positive, got {rho!r}")

    if half_width is None:
        if weight == "none":
            # no Gaussian envelope helps; rely on f's own decay and push far out
            half_width = 1e5
        else:
            gain = 0.5 if weight == "half-gaussian" else 1.0
            half_width = math.sqrt((45.0 + gain * rho * rho + 3.0) / gain)
    contour = StripContour.graded(
        rho, half_width, min(feature_scale, half_width / 4), panels=96, points_per_panel=16
    )

    def envelope(zs):
        if weight == "half-gaussian":
            return np.abs(np.exp(-0.5 * zs * zs))
        if weight == "full-gaussian":
            return np.abs(np.exp(-zs * zs))
        return 1.0

    vals = []
    per_panel = None
    for pts in (contour.points_per_panel, 2 * contour.points_per_panel):
        x, w = panel_nodes(contour.breaks, pts)
        total = np.zeros_like(x)
        for sgn in (-1.0, 1.0):
            zs = x + 1j * sgn * rho
            fv = np.abs(np.asarray(f(zs))) * envelope(zs)
            if not np.all(np.isfinite(fv)):
                raise QuadratureError("volume integrand is non-finite on the boundary")
            total += fv
        vals.append(float(np.dot(w, total)))
        if pts == 2 * contour.points_per_panel:
            per_panel = (w * total).reshape(contour.panels, -1).sum(axis=1)
    coarse, fine = vals
    if abs(fine - coarse) > rel_tol * abs(fine):
        raise QuadratureError(
            f"boundary volume doubling check failed ({coarse:.6e} vs {fine:.6e})"
        )
    tail = 0.0
    for last, prev in ((per_panel[-1], per_panel[-2]), (per_panel[0], per_panel[1])):
        if last > 0.0:
            r = min(last / max(prev, 1e-300), 0.9)
            tail += last * r / (1.0 - r)
    if tail > 1e-6 * fine:
        raise QuadratureError(
            f"boundary volume tail {tail:.3e} not negligible against {fine:.6e}; "
            "the weighted function may not be integrable on the strip boundary"
        )
    return fine


# ---------------------------------------------------------------------------
# certified bounds
# ---------------------------------------------------------------------------

BOUND_KINDS = (
    "coeff-poly-scaled",
    "coeff-poly",
    "coeff-func",
    "proj-poly-l2",
    "proj-func-l2",
    "proj-func-max",
    "interp-l2",
    "interp-max",
    "quad",
    "diff-l2",
    "diff-max",
)

_VOLUME_FOR_KIND = {
    "coeff-poly-scaled": "half-gaussian",
    "coeff-poly": "half-gaussian",
    "coeff-func": "none",
    "proj-poly-l2": "half-gaussian",
    "proj-func-l2": "none",
    "proj-func-max": "none",
    "interp-l2": "half-gaussian",
    "interp-max": "none",
    "quad": "full-gaussian",
    "diff-l2": "half-gaussian",
    "diff-max": "none",
}


def volume_weight_for(kind: str) -> str:
    """Which boundary-volume weight a bound kind expects."""
    if kind not in BOUND_KINDS:
        raise DomainError(f"unknown bound kind {kind!r}")
    return _VOLUME_FOR_KIND[kind]


def bound_log(kind: str, n: int, rho: float, volume: float, *, m: int = 0) -> float:
    """log of the certified error bound for approximation degree n.

    ``volume`` is the boundary volume with the weight given by
    :func:`volume_weight_for`.  ``m`` is the derivative order and only
    meaningful for the two ``diff-*`` kinds.
    """
    if kind not in BOUND_KINDS:
        raise DomainError(f"unknown bound kind {kind!r}")
    if not (volume > 0 and math.isfinite(volume)):
        raise DomainError(f"boundary volume must be positive and finite, got {volume!r}")
    if not (rho > 0 and math.isfinite(rho)):
        raise DomainError(f"strip half-height must be positive, got {rho!r}")
    if kind.startswith("diff"):
        if m < 1:
            raise DomainError("diff bounds need a derivative order m >= 1")
    elif m != 0:
        raise DomainError(f"derivative order is only meaningful for diff bounds, got m={m}")
    n = int(n)
    if n < 1:
        raise DomainError(f"bounds are stated for degrees n >= 1, got {n}")

    s2n = math.sqrt(2.0 * n)
    s2n1 = math.sqrt(2.0 * (n + 1.0))
    lv = math.log(volume)
    ln_n = math.log(n)
    if kind == "coeff-poly-scaled":
        return lv - rho * s2n1
    if kind == "coeff-poly":
        return lv - rho * s2n1 - log_coeff_normalizer(n)
    if kind == "coeff-func":
        return lv - math.log(2.0 ** 0.75 * math.sqrt(math.pi)) - 0.25 * math.log(n + 1.0) - rho * s2n1
    if kind == "proj-poly-l2":
        return lv - 0.5 * math.log(4.0 * math.pi * rho) - rho * s2n
    if kind == "proj-func-l2":
        return lv - 0.5 * math.log(4.0 * math.pi * rho) - rho * s2n
    if kind == "proj-func-max":
        return lv - math.log(2.0 ** 0.25 * math.pi ** 0.75 * rho) + 0.25 * ln_n - rho * s2n
    if kind == "interp-l2":
        return lv - math.log(2.0 ** 0.25 * rho * math.sqrt(math.pi)) + 0.25 * ln_n - rho * s2n
    if kind == "interp-max":
        return lv - math.log(2.0 ** 0.25 * math.pi ** 0.75 * rho) + 0.25 * ln_n - rho * s2n
    if kind == "quad":
        return lv - 2.0 * rho * s2n
    if kind == "diff-l2":
        return lv + (0.5 * m - 1.0) * math.log(2.0) - 0.5 * math.log(math.pi * rho) + 0.5 * m * ln_n - rho * s2n
    # diff-max
    return lv + (0.5 * m - 0.25) * math.log(2.0) - 0.75 * math.log(math.pi) + (0.5 * m + 0.25) * ln_n - rho * s2n


def bound(kind: str, n: int, rho: float, volume: float, *, m: int = 0) -> float:
    """Materialized certified bound (0.0 on underflow)."""
    lv = bound_log(kind, n, rho, volume, m=m)
    if lv < -745.0:
        return 0.0
    return math.exp(lv)


class BoundCheck(NamedTuple):
    passed: bool
    max_ratio: float
    worst_n: int
    checked: int


def certify_bound(
    ns: Sequence[int],
    errors: Sequence[float],
    kind: str,
    rho: float,
    volume: float,
    *,
    slack: float = 1.5,
    m: int = 0,
    floor: float = 1e-14,
) -> BoundCheck:
    """Check measured errors against slack * bound at every degree.

    Measurements at or below ``floor`` are roundoff-dominated and are
    skipped.  ``slack`` absorbs the finite-degree gap between the
    asymptotic bound constants and small-n behavior; the returned
    ``max_ratio`` records the worst measured/bound ratio so callers can
    see the actual margin.
    """
    ns = list(ns)
    errors = list(errors)
    if len(ns) != len(errors):
        raise DomainError("degree and error sequences must have equal length")
    worst = (0.0, -1)
    checked = 0
    for n, e in zip(ns, errors):
        if not (e > floor and math.isfinite(e)):
            continue
        b = bound_log(kind, n, rho, volume, m=m)
        ratio = math.exp(math.log(e) - b)
        checked += 1
        if ratio > worst[0]:
            worst = (ratio, n)
    if checked == 0:
        raise FitError("no measurements above the roundoff floor to certify")
    return BoundCheck(worst[0] <= slack, worst[0], worst[1], checked)


# ---------------------------------------------------------------------------
# decay-rate fitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit of  ln e_n = log_prefactor + p ln n - rate sqrt(2(n+shift))."""

    rate: float
    log_prefactor: float
    prefactor_power: float
    residual: float
    points_used: int
    shift: int = 0


def fit_decay(
    ns: Sequence[int],
    errors: Sequence[float],
    *,
    prefactor_power: float | None = None,
    shift: int = 0,
    floor: float = 1e-14,
) -> DecayFit:
    """Fit a root-exponential decay law to measured errors.

    Points at or below ``floor`` (roundoff saturation) are discarded; at
    least 5 must survive.  With ``prefactor_power`` given the algebraic
    power is held fixed and only the prefactor and rate are fitted;
    otherwise all three parameters are free.
    """
    ns_arr = np.asarray(list(ns), dtype=float)
    es = np.asarray(list(errors), dtype=float)
    if ns_arr.shape != es.shape:
        raise DomainError("degree and error sequences must have equal length")
    keep = (es > floor) & np.isfinite(es) & (ns_arr > 0)
    ns_arr, es = ns_arr[keep], es[keep]
    if ns_arr.size < 5:
        raise FitError(
            f"need at least 5 measurements above the floor {floor:g}; have {ns_arr.size}"
        )
    y = np.log(es)
    basis_exp = -np.sqrt(2.0 * (ns_arr + shift))
    if prefactor_power is None:
        a = np.column_stack([np.ones_like(ns_arr), np.log(ns_arr), basis_exp])
        sol, *_ = np.linalg.lstsq(a, y, rcond=None)
        log_c, power, rate = sol
    else:
        a = np.column_stack([np.ones_like(ns_arr), basis_exp])
        sol, *_ = np.linalg.lstsq(a, y - prefactor_power * np.log(ns_arr), rcond=None)
        log_c, rate = sol
        power = float(prefactor_power)
    fitted = a @ sol + (0.0 if prefactor_power is None else prefactor_power * np.log(ns_arr))
    residual = float(np.sqrt(np.mean((y - fitted) ** 2)))
    return DecayFit(float(rate), float(log_c), float(power), residual, int(ns_arr.size), shift)


# ---------------------------------------------------------------------------
# error measurement
# ---------------------------------------------------------------------------


def weighted_l2_error(
    f: Callable[[np.ndarray], np.ndarray],
    coeffs: Sequence[float],
    basis: str = "func",
    *,
    rule_order: int | None = None,
) -> float:
    """Norm of f minus its truncated series: L^2(R) for the orthonormal
    basis, L^2(e^{-x^2}) for the polynomial basis.

    Evaluated on a Gauss-Hermite rule and once more at double the order;
    a disagreement above 5% on a non-roundoff-sized result raises
    :class:`QuadratureError`.
    """
    c = np.asarray(coeffs, dtype=float)
    if basis not in ("poly", "func"):
        raise DomainError(f"basis must be 'poly' or 'func', got {basis!r}")
    if basis == "poly":
        # Work in the weighted frame:  int (f - sum a_k H_k)^2 e^{-x^2} dx
        # is the plain-L2 error of f e^{-x^2/2} against the orthonormal
        # series with coefficients a_k sqrt(gamma_k).  Unweighted
        # polynomial values overflow doubles at the far nodes of a large
        # rule; the weighted frame stays bounded.
        logs = np.array([0.5 * log_hermite_norm_sq(k) for k in range(c.size)])
        with np.errstate(divide="ignore"):  # log of an exact-zero coefficient
            mag = np.log(np.abs(c)) + logs
        if np.any(mag > 709.0):
            raise DomainError(
                "polynomial-basis series is too large to measure: some "
                "a_k sqrt(gamma_k) exceeds double precision"
            )
        c = np.sign(c) * np.exp(mag)
    order = rule_order if rule_order is not None else max(4 * c.size, 256)
    out = []
    for p in (order, 2 * order):
        rule = gauss_hermite_rule(p)
        x = rule.nodes
        fx = np.asarray(f(x), dtype=float)
        if basis == "poly":
            fx = fx * np.exp(-0.5 * x * x)
        diff = fx - eval_expansion(c, x, "func")
        val = float(np.dot(rule.modified_weights, diff * diff))
        out.append(math.sqrt(max(val, 0.0)))
    coarse, fine = out
    if fine > 1e-12 and abs(fine - coarse) > 0.05 * fine:
        raise QuadratureError(
            f"L2 error measurement unstable under rule doubling ({coarse:.3e} vs {fine:.3e})"
        )
    return fine


def _golden_refine(h: Callable[[float], float], lo: float, hi: float, iters: int = 60) -> float:
    """Maximize h on [lo, hi] by golden-section search; returns the max."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c1 = b - invphi * (b - a)
    c2 = a + invphi * (b - a)
    f1, f2 = h(c1), h(c2)
    for _ in range(iters):
        if f1 < f2:
            a, c1, f1 = c1, c2, f2
            c2 = a + invphi * (b - a)
            f2 = h(c2)
        else:
            b, c2, f2 = c2, c1, f1
            c1 = b - invphi * (b - a)
            f1 = h(c1)
        if b - a < 1e-12 * max(1.0, abs(a)):
            break
    return max(f1, f2)


def max_error(
    f: Callable[[np.ndarray], np.ndarray],
    coeffs: Sequence[float],
    basis: str = "func",
    *,
    half_width: float | None = None,
    grid: int = 4000,
    refine_top: int = 5,
) -> float:
    """sup over R of |f - series| for orthonormal-function series.

    Scans a uniform grid covering the series' oscillation region (out to
    the classical turning point plus margin), then polishes the few
    largest local maxima by golden-section search.  Polynomial-basis
    series grow without bound, so only ``basis="func"`` is meaningful
    here.
    """
    if basis != "func":
        raise DomainError("sup-norm error is defined for the decaying 'func' basis only")
    c = np.asarray(coeffs, dtype=float)
    n = c.size - 1
    x_max = half_width if half_width is not None else math.sqrt(2.0 * n + 1.0) + 8.0
    xs = np.linspace(-x_max, x_max, grid)
    d = np.abs(np.asarray(f(xs), dtype=float) - eval_expansion(c, xs, "func"))
    if not np.all(np.isfinite(d)):
        raise DomainError("function evaluated to a non-finite value on the scan grid")
    # indices of local maxima (plus the endpoints)
    interior = np.where((d[1:-1] >= d[:-2]) & (d[1:-1] >= d[2:]))[0] + 1
    order = interior[np.argsort(d[interior])][::-1][:refine_top]

    def h(t: float) -> float:
        return abs(float(f(np.array([t]))[0]) - float(eval_expansion(c, t, "func")))

    best = float(np.max(d))
    for idx in order:
        lo, hi = xs[max(idx - 1, 0)], xs[min(idx + 1, grid - 1)]
        best = max(best, _golden_refine(h, lo, hi))
    return best


# ---------------------------------------------------------------------------
# Gauss-Hermite quadrature error, direct and by contour
# ---------------------------------------------------------------------------


def gh_quadrature_error(
    f: Callable[[np.ndarray], np.ndarray],
    n: int,
    true_integral: float,
) -> float:
    """I - Q_n: the degree-n Gauss-Hermite error against a known
    int e^{-x^2} f dx."""
    rule = gauss_hermite_rule(n)
    q = rule.integrate_weighted(np.asarray(f(rule.nodes), dtype=float))
    return true_integral - q


def gh_error_contour(
    f: Callable[[np.ndarray], np.ndarray],
    n: int,
    rho: float,
    *,
    contour: StripContour | None = None,
    sigma: float = 0.0,
    feature_scale: float = 0.5,
    rel_tol: float = 1e-9,
    tail_tol: float = 1e-9,
) -> complex:
    """I - Q_n reconstructed from the boundary integral of
    (Phi_{n+1}/H_{n+1}) f over the strip.

    The kernel ratio decays like e^{-2 rho sqrt(2n)} on the boundary —
    twice the projection rate, which is exactly why Gauss-Hermite
    quadrature converges at the doubled rate.  H_{n+1} has all its zeros
    on the real axis, so the ratio is analytic on the contour.
    """
    nu = n + 1
    if contour is None:
        contour = auto_coeff_contour(rho, n, sigma=sigma, feature_scale=feature_scale)

    def g(zs):
        log_phi, phase_phi = phi_sequence_log(nu, zs)
        log_h, phase_h = hermite_poly_log_rows(nu, zs)
        ratio = (phase_phi[nu] / phase_h[nu]) * np.exp(log_phi[nu] - log_h[nu])
        fv = np.asarray(f(zs))
        return ratio * fv

    return strip_boundary_integral(g, contour, rel_tol=rel_tol, tail_tol=tail_tol)
