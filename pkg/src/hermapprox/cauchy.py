"""Weighted Cauchy transforms of Hermite polynomials and strip contours.

The central object is

    Phi_n(z) = (1/(2 pi i)) int e^{-x^2} H_n(x) / (z - x) dx,   z off the real line,

the recessive companion of H_n: it decays like
|e^{-z^2/2}| e^{-|Im z| sqrt(2(n+1))} Gamma(n+1)/(Gamma((n+1)/2) sqrt(2(n+1)))
as n grows, which is exactly the mechanism behind root-exponential
convergence of Hermite expansions for functions analytic in a strip.

Three independent evaluation routes are provided (a direct half-line
integral, backward recurrence normalized at Phi_0 = -w(z)/2, and the
asymptotic magnitude), plus composite quadrature over strip boundaries
traversed counterclockwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    CapacityError,
    ConvergenceError,
    DomainError,
    QuadratureError,
    TruncationError,
)
from .logscale import LogScaledValue
from .quad import leggauss_cached, panel_nodes
from .specfun import faddeeva_many, log_gamma

__all__ = [
    "StripContour",
    "strip_boundary_integral",
    "phi_direct",
    "phi_direct_log",
    "phi_sequence",
    "phi_sequence_log",
    "phi_asymptotic_magnitude",
    "phi_asymptotic_log_magnitude",
    "log_phi_scale",
    "gaussian_half_width",
]

_SQRT_PI = math.sqrt(math.pi)
_PHI_DIRECT_CAP = 400
_PHI_SEQ_CAP = 400


# ---------------------------------------------------------------------------
# Strip contours
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StripContour:
    """Boundary of the strip |Im z| < rho, truncated to |Re z| <= half_width.

    Orientation is counterclockwise around the enclosed piece of the real
    line: the lower edge Im z = -rho runs left to right, the upper edge
    Im z = +rho right to left.  ``breaks`` are the shared panel edges in
    the real coordinate.
    """

    rho: float
    half_width: float
    points_per_panel: int
    breaks: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (math.isfinite(self.rho) and self.rho > 0):
            raise DomainError(f"strip half-height must be > 0, got {self.rho!r}")
        if not (math.isfinite(self.half_width) and self.half_width > 0):
            raise DomainError(f"half_width must be > 0, got {self.half_width!r}")
        if self.points_per_panel < 8:
            raise DomainError("points_per_panel must be >= 8")
        if self.panels < 4:
            raise DomainError("need at least 4 panels per line")
        b = np.asarray(self.breaks, dtype=float)
        if b[0] != -self.half_width or b[-1] != self.half_width or np.any(np.diff(b) <= 0):
            raise DomainError("breaks must ascend from -half_width to half_width")
        b.setflags(write=False)

    @property
    def panels(self) -> int:
        return len(self.breaks) - 1

    @staticmethod
    def uniform(rho: float, half_width: float, panels: int = 32, points_per_panel: int = 16) -> "StripContour":
        breaks = np.linspace(-half_width, half_width, panels + 1)
        return StripContour(rho, half_width, points_per_panel, breaks)

    @staticmethod
    def graded(
        rho: float,
        half_width: float,
        focus_width: float,
        panels: int = 48,
        points_per_panel: int = 16,
    ) -> "StripContour":
        """Panels geometrically refined toward Re z = 0.

        ``focus_width`` sets the smallest panel scale; used when the
        integrand has a sharp feature above/below the origin (e.g. a pole
        just outside the strip).
        """
        if not (0 < focus_width < half_width):
            raise DomainError("need 0 < focus_width < half_width")
        per_side = max(panels // 2, 8)
        ratio = (half_width / focus_width) ** (1.0 / (per_side - 1))
        edges = focus_width * ratio ** np.arange(per_side)
        edges[-1] = half_width
        right = np.concatenate(([0.0], edges))
        breaks = np.concatenate((-right[::-1], right[1:]))
        return StripContour(rho, half_width, points_per_panel, breaks)


def gaussian_half_width(rho: float, drop: float = 45.0, sigma: float = 0.0) -> float:
    """Half-width X with e^{-X^2/2 + rho^2/2} X^max(sigma,0) below e^{-drop}.

    Suits integrands dominated by a Gaussian envelope on the strip
    boundary (the weighted-transform kernels all are).
    """
    x = 3.0
    s = max(sigma, 0.0)
    for _ in range(40):
        x_new = math.sqrt(2.0 * (drop + 0.5 * rho * rho + s * math.log(max(x, 1.0))))
        if abs(x_new - x) < 1e-12:
            break
        x = x_new
    return x


def _contour_points(contour: StripContour, points_per_panel: int):
    x, w = panel_nodes(contour.breaks, points_per_panel)
    z_lower = x - 1j * contour.rho
    z_upper = x + 1j * contour.rho
    return x, w, z_lower, z_upper


def strip_boundary_integral(
    g,
    contour: StripContour,
    *,
    rel_tol: float = 1e-10,
    tail_tol: float = 1e-11,
    full_output: bool = False,
):
    """Counterclockwise integral of ``g`` over the truncated strip boundary.

    ``g`` must accept a complex ndarray.  The result is computed at the
    contour's ``points_per_panel`` and at double that; a relative
    difference above ``rel_tol`` raises :class:`QuadratureError`.  The
    discarded tail is estimated by geometric extrapolation of the
    outermost panel contributions and must stay below
    ``tail_tol * |integral|`` (:class:`TruncationError` otherwise).
    """
    results = []
    per_panel_mags = None
    for pts in (contour.points_per_panel, 2 * contour.points_per_panel):
        x, w, z_lo, z_up = _contour_points(contour, pts)
        with np.errstate(invalid="ignore"):
            vals = np.asarray(g(z_lo)) - np.asarray(g(z_up))
        if not np.all(np.isfinite(vals)):
            raise QuadratureError("integrand evaluated to a non-finite value on the contour")
        results.append(complex(np.dot(w, vals)))
        if pts == 2 * contour.points_per_panel:
            contrib = (w * vals).reshape(contour.panels, pts)
            per_panel_mags = np.abs(contrib.sum(axis=1))
    coarse, fine = results
    # reference scale robust to cancellation: a result near zero from an
    # odd integrand is still converged when the delta is tiny relative to
    # the largest single-panel contribution
    panel_peak = float(np.max(per_panel_mags)) if per_panel_mags.size else 0.0
    scale = max(abs(fine), panel_peak)
    err = abs(fine - coarse)
    if err > rel_tol * scale + 1e-300:
        raise QuadratureError(
            f"strip integral doubling check failed: |delta| = {err:.3e} vs scale = {scale:.3e}"
        )

    # geometric tail extrapolation from the outermost two panels on each side
    tail = 0.0
    for last, prev in ((per_panel_mags[-1], per_panel_mags[-2]), (per_panel_mags[0], per_panel_mags[1])):
        if last == 0.0:
            continue
        r = min(last / max(prev, 1e-300), 0.9)
        tail += last * r / (1.0 - r)
    if tail > tail_tol * scale and tail > 1e-305:
        raise TruncationError(
            f"estimated contour tail {tail:.3e} exceeds {tail_tol:.1e} of |I| = {scale:.3e}",
            tail,
            scale,
        )
    if full_output:
        return fine, {"doubling_delta": err, "tail_estimate": tail}
    return fine


# ---------------------------------------------------------------------------
# Phi via the direct half-line integral
# ---------------------------------------------------------------------------


def _phi_direct_upper_log(n: int, z: complex) -> LogScaledValue:
    """Phi_n(z) for Im z > 0 from
    (2^n/sqrt(pi)) e^{-(n+2) pi i/2} int_0^inf t^n e^{-t^2 + 2 i z t} dt."""
    x, y = z.real, z.imag

    def log_env(t):
        with np.errstate(divide="ignore"):
            return n * np.log(t) - t * t - 2.0 * y * t

    t_peak = 0.0 if n == 0 else 0.5 * (-y + math.sqrt(y * y + 2.0 * n))
    t_ref = max(t_peak, 1e-3)
    ell_ref = float(log_env(np.array([t_ref]))[0])

    # upper cutoff
    t_hi = t_ref + 1.0
    while float(log_env(np.array([t_hi]))[0]) > ell_ref - 50.0:
        t_hi = 1.3 * t_hi + 0.5
    # lower cutoff (integrand vanishes like t^n at 0)
    t_lo = 0.0
    if n > 0:
        lo, hi = 0.0, t_peak
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if mid <= 0.0:
                break
            if float(log_env(np.array([mid]))[0]) < ell_ref - 50.0:
                lo = mid
            else:
                hi = mid
        t_lo = lo

    # panel width limited by the e^{2ixt} oscillation and by the envelope scale
    width_osc = math.pi / max(abs(x), 0.5)
    width_env = max((t_hi - t_lo) / 12.0, 1e-12)
    width = min(width_osc, width_env)
    n_panels = max(8, int(math.ceil((t_hi - t_lo) / width)))
    breaks = np.linspace(t_lo, t_hi, n_panels + 1)

    def evaluate(pts):
        tq, wq = panel_nodes(breaks, pts)
        ell = log_env(tq)
        m = float(np.max(ell))
        s = complex(np.dot(wq, np.exp(ell - m + 2j * x * tq)))
        gross = float(np.dot(wq, np.exp(ell - m)))
        return m, s, gross

    m1, s1, _ = evaluate(24)
    m2, s2, gross2 = evaluate(48)
    v1 = s1 * math.exp(m1 - m2)
    # the oscillatory sum may be genuinely cancellation-dominated (the
    # transform is small exactly when e^{2ixt} phases cancel); allow the
    # roundoff floor of the gross magnitude in addition to the relative gate
    if abs(v1 - s2) > 1e-11 * abs(s2) + 3e-14 * gross2:
        raise QuadratureError(
            f"phi_direct({n}, {z!r}): quadrature doubling check failed"
        )
    if s2 == 0:
        return LogScaledValue.zero()
    prefactor_phase = complex(
        math.cos(-(n + 2) * math.pi / 2.0), math.sin(-(n + 2) * math.pi / 2.0)
    )
    log_mag = n * math.log(2.0) - 0.5 * math.log(math.pi) + m2 + math.log(abs(s2))
    return LogScaledValue(log_mag, prefactor_phase * s2 / abs(s2))


def _check_z_off_axis(z: complex) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"argument must be finite, got {z!r}")
    if z.imag == 0.0:
        raise DomainError("the weighted Cauchy transform needs Im z != 0")
    return z


def phi_direct_log(n: int, z: complex) -> LogScaledValue:
    """Phi_n(z) by direct quadrature, as a log-scaled value (any size n <= 400)."""
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    if n > _PHI_DIRECT_CAP:
        raise CapacityError(f"phi_direct supports n <= {_PHI_DIRECT_CAP}, got {n}")
    z = _check_z_off_axis(z)
    if z.imag > 0:
        return _phi_direct_upper_log(n, z)
    v = _phi_direct_upper_log(n, z.conjugate())
    return LogScaledValue(v.log_mag, -v.phase.conjugate())


def phi_direct(n: int, z: complex) -> complex:
    """Phi_n(z) by direct quadrature of the half-line representation.

    Relative accuracy ~1e-10 for n <= 400 and |Im z| >= 0.05 (the lower
    half-plane is reached through Phi_n(conj z) = -conj(Phi_n(z))).  For
    large |Re z| the transform is small through genuine phase
    cancellation, which costs roughly a factor e^{(Re z)^2/2} of the
    headline accuracy in doubles; prefer :func:`phi_sequence_log` there.
    Use :func:`phi_direct_log` when |Phi_n| overflows doubles (n >~ 150).
    """
    return complex(phi_direct_log(n, z).materialize())


# ---------------------------------------------------------------------------
# Phi ladders by backward recurrence (Miller's algorithm)
# ---------------------------------------------------------------------------


def log_phi_scale(n: int) -> float:
    """log s_n with s_n = Gamma(n+1) / (Gamma((n+1)/2) sqrt(2(n+1))).

    s_n is the z-independent part of the asymptotic magnitude of Phi_n;
    Phi_n/s_n stays O(e^{rho^2/2}) on strip boundaries, which makes it the
    right normalization for large-n work in doubles.
    """
    return (
        log_gamma(n + 1.0)
        - log_gamma((n + 1.0) / 2.0)
        - 0.5 * math.log(2.0 * (n + 1.0))
    )


def _phi_seq_upper(n_max: int, z: np.ndarray, guard: int):
    """Backward-recurrence ladder at points with Im z > 0.

    Returns ``(log_mag, phase)`` arrays of shape (n_max+1, len(z)).
    """
    npts = z.size
    stored = np.zeros((n_max + 1, npts), dtype=complex)
    stored_scale = np.zeros((n_max + 1, npts))

    y_hi = np.zeros(npts, dtype=complex)  # y_{k+1}
    y_cur = np.ones(npts, dtype=complex)  # y_k at k = guard
    scale = np.zeros(npts)  # cumulative log of applied divisors
    for k in range(guard, 0, -1):
        if k <= n_max:
            stored[k] = y_cur
            stored_scale[k] = scale
        y_lo = (2.0 * z * y_cur - y_hi) / (2.0 * k)
        y_hi, y_cur = y_cur, y_lo
        mag = np.abs(y_cur)
        # the descending ladder can shrink as well as grow; keep the live
        # pair in the representable band and fold the factor into `scale`
        stray = (mag > 1e250) | ((mag > 0.0) & (mag < 1e-250))
        if np.any(stray):
            s = np.where(stray, mag, 1.0)
            y_cur = y_cur / s
            y_hi = y_hi / s
            scale = scale + np.log(s)
    stored[0] = y_cur
    stored_scale[0] = scale

    mag0 = np.abs(stored[0])
    if np.any(mag0 == 0.0):
        return None
    phi0 = -0.5 * faddeeva_many(z)

    stored_mag = np.abs(stored)
    safe_mag = np.where(stored_mag > 0.0, stored_mag, 1.0)
    with np.errstate(divide="ignore"):
        log_raw = np.where(stored_mag > 0.0, np.log(safe_mag), -np.inf) + stored_scale
    phase_raw = np.where(stored_mag > 0.0, stored / safe_mag, 0.0)

    log_norm = np.log(np.abs(phi0)) - log_raw[0]
    phase_norm = (phi0 / np.abs(phi0)) / phase_raw[0]
    log_mag = log_raw + log_norm[None, :]
    phase = phase_raw * phase_norm[None, :]

    # self-check: the recovered Phi_1 must match the exact seed
    # 2 z Phi_0 + i/sqrt(pi).  Forming the seed itself cancels badly for
    # large |z| (both terms approach ±i/sqrt(pi)), so the tolerance keeps
    # a roundoff floor proportional to the pre-cancellation magnitudes.
    if n_max >= 1:
        phi1_exact = 2.0 * z * phi0 + 1j / _SQRT_PI
        gross = 2.0 * np.abs(z) * np.abs(phi0) + 1.0 / _SQRT_PI
        phi1 = phase[1] * np.exp(log_mag[1])
        ok = np.abs(phi1 - phi1_exact) <= 1e-9 * np.abs(phi1_exact) + 1e-13 * gross
        if not np.all(ok):
            return None
    return log_mag, phase


def phi_sequence_log(n_max: int, z: np.ndarray):
    """log|Phi_k| and phases, k = 0..n_max, at an array of off-axis points.

    Miller backward recurrence started ``guard`` indices above ``n_max``
    (guard grows like (sqrt(n) + 13/|Im z|)^2, the separation rate of the
    recessive and dominant solutions) and normalized at
    Phi_0 = -w(z)/2.  Each call is self-validated against the exact Phi_1;
    failures retry with a larger guard before raising
    :class:`ConvergenceError`.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    if n_max > _PHI_SEQ_CAP:
        raise CapacityError(f"phi_sequence supports n_max <= {_PHI_SEQ_CAP}, got {n_max}")
    z = np.asarray(z, dtype=complex)
    if z.ndim != 1:
        raise DomainError("points must form a 1-d array")
    if not np.all(np.isfinite(z)):
        raise DomainError("points must be finite")
    im = np.imag(z)
    if np.any(im == 0.0):
        raise DomainError("the weighted Cauchy transform needs Im z != 0")

    lower = im < 0
    zu = np.where(lower, np.conj(z), z)
    y_min = float(np.min(np.abs(im)))
    guard = int((math.sqrt(n_max) + 13.0 / y_min + 3.0) ** 2)
    guard = max(guard, n_max + 60)
    for _ in range(4):
        out = _phi_seq_upper(n_max, zu, guard)
        if out is not None:
            break
        guard = int(guard * 1.5)
    else:
        raise ConvergenceError(
            f"phi_sequence({n_max}): backward recurrence failed to validate "
            f"even with guard {guard}"
        )
    log_mag, phase = out
    # reflect back: Phi_n(z) = -conj(Phi_n(conj z)) for Im z < 0
    phase = np.where(lower[None, :], -np.conj(phase), phase)
    return log_mag, phase


def phi_sequence(n_max: int, z: complex) -> list[complex]:
    """[Phi_0(z), ..., Phi_{n_max}(z)] as ordinary complex numbers.

    Materializes the log-scaled ladder; raises :class:`CapacityError` when
    the top magnitude exceeds the double range (use
    :func:`phi_sequence_log` then).
    """
    z = _check_z_off_axis(z)
    log_mag, phase = phi_sequence_log(n_max, np.array([z]))
    top = float(np.max(log_mag[np.isfinite(log_mag[:, 0]), 0])) if np.any(np.isfinite(log_mag[:, 0])) else 0.0
    if top > 700.0:
        raise CapacityError(
            f"phi_sequence({n_max}, {z!r}): |Phi| reaches e^{top:.0f}, beyond doubles; "
            "use phi_sequence_log"
        )
    return [complex(phase[k, 0] * math.exp(log_mag[k, 0])) if math.isfinite(log_mag[k, 0]) else 0.0j for k in range(n_max + 1)]


# ---------------------------------------------------------------------------
# Asymptotic magnitude
# ---------------------------------------------------------------------------


def phi_asymptotic_log_magnitude(n: int, z: complex) -> float:
    """log of the large-n magnitude law
    |Phi_n(z)| ~ s_n |e^{-z^2/2}| e^{-|Im z| sqrt(2(n+1))}."""
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    z = _check_z_off_axis(z)
    re_part = -0.5 * (z.real * z.real - z.imag * z.imag)
    return log_phi_scale(n) + re_part - abs(z.imag) * math.sqrt(2.0 * (n + 1.0))


def phi_asymptotic_magnitude(n: int, z: complex) -> float:
    """Materialized asymptotic magnitude (inf when beyond double range)."""
    lv = phi_asymptotic_log_magnitude(n, z)
    if lv > 709.0:
        return math.inf
    return math.exp(lv)
