"""Tests for projection, interpolation, evaluation, differentiation and
the contour coefficient route.

Frozen values and provenance:

* x^2 = H_2/4 + H_0/2 and x^3 = H_3/8 + 3 H_1/4 (expand the polynomials).
* int e^{-x^2/2} psi_0 = pi^{1/4} (Gaussian integral).
* Runge-kernel coefficients: for f = 1/(x^2 + tau^2) the polynomial-basis
  coefficient is c_n = cos(n pi/2) U((n+1)/2, 1/2, tau^2) / (2^n tau) with
  Kummer's U; U(1/2, 1/2, 4) = 0.4526770499811746 (mpmath, 30 digits).
* H_3'' = 48 x = 24 H_1.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermapprox.approx import (
    auto_coeff_contour,
    contour_coeff,
    contour_coeff_scaled,
    eval_expansion,
    differentiate,
    interpolate,
    log_coeff_normalizer,
    project,
    with_scaled_argument,
)
from hermapprox.cauchy import StripContour
from hermapprox.exceptions import (
    CapacityError,
    ConvergenceError,
    DomainError,
    TruncationError,
)
from hermapprox.hermite import gauss_hermite_rule, hermite_function_rows, hermite_poly
from hermapprox.specfun import kummer_u_half


def runge(tau):
    return lambda x: 1.0 / (np.asarray(x) ** 2 + tau * tau)


# ---------------------------------------------------------------------------
# frozen values
# ---------------------------------------------------------------------------


class TestFrozen:
    def test_project_square_poly(self):
        c = project(lambda x: x * x, 4, "poly")
        assert np.allclose(c, [0.5, 0.0, 0.25, 0.0, 0.0], atol=1e-14)

    def test_project_gaussian_func(self):
        c = project(lambda x: np.exp(-0.5 * x * x), 3, "func")
        assert c[0] == pytest.approx(math.pi ** 0.25, rel=1e-13)
        assert np.max(np.abs(c[1:])) < 1e-13

    def test_interpolate_cubic_exact(self):
        c = interpolate(lambda x: x ** 3, 3, "poly")
        assert np.allclose(c, [0.0, 0.75, 0.0, 0.125], atol=1e-13)
        assert eval_expansion(c, 0.37, "poly") == pytest.approx(0.37 ** 3, rel=1e-13)

    def test_eval_poly_by_hand(self):
        # 1 + H_2(2)/4 = 1 + (4*4-2)/4 = 4.5
        assert eval_expansion([1.0, 0.0, 0.25, 0.0], 2.0, "poly") == pytest.approx(4.5, rel=1e-15)

    def test_differentiate_poly_twice(self):
        assert np.allclose(differentiate([0, 0, 0, 1.0], 2, "poly"), [0.0, 24.0])

    def test_differentiate_func_ladder(self):
        got = differentiate([1.0], 1, "func")
        assert np.allclose(got, [0.0, -math.sqrt(0.5)])

    def test_contour_coeff_runge_closed_form(self):
        c0 = contour_coeff(runge(2.0), 0, 1.5, sigma=-2.0)
        assert c0.real == pytest.approx(0.5 * 0.4526770499811746, rel=1e-11)
        assert abs(c0.imag) < 1e-15
        c2 = contour_coeff(runge(2.0), 2, 1.5, sigma=-2.0)
        expected = -kummer_u_half(1.5, 4.0).materialize() / 8.0
        assert c2.real == pytest.approx(expected, rel=1e-12)


# ---------------------------------------------------------------------------
# projection and interpolation structure
# ---------------------------------------------------------------------------


class TestProjectInterpolate:
    def test_projection_idempotent_func(self):
        c_true = np.array([0.8, -0.3, 0.0, 0.55, -0.12, 0.07])
        f = lambda x: eval_expansion(c_true, x, "func")
        got = project(f, 5, "func")
        assert np.allclose(got, c_true, atol=1e-12)

    def test_projection_idempotent_poly(self):
        c_true = np.array([0.2, 0.0, -0.4, 0.1])
        f = lambda x: eval_expansion(c_true, x, "poly")
        got = project(f, 3, "poly")
        assert np.allclose(got, c_true, atol=1e-12)

    @pytest.mark.parametrize("basis", ["poly", "func"])
    def test_even_function_kills_odd_coeffs(self, basis):
        c = project(runge(1.0), 11, basis)
        assert np.max(np.abs(c[1::2])) < 1e-13

    def test_degree_consistency(self):
        a = project(runge(1.0), 8, "func")
        b = project(runge(1.0), 16, "func")
        assert np.allclose(a, b[:9], atol=1e-12)

    @pytest.mark.parametrize("basis", ["poly", "func"])
    def test_interpolant_matches_at_nodes(self, basis):
        n = 12
        f = runge(0.8)
        c = interpolate(f, n, basis)
        nodes = gauss_hermite_rule(n).nodes
        got = eval_expansion(c, nodes, basis)
        assert np.allclose(got, f(nodes), rtol=1e-9, atol=1e-12)

    def test_interpolation_aliasing_differs_from_projection(self):
        n = 10
        ci = interpolate(runge(0.5), n, "func")
        cp = project(runge(0.5), n, "func")
        assert np.max(np.abs(ci - cp)) > 1e-6

    @pytest.mark.filterwarnings("ignore:divide by zero")
    def test_project_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            project(lambda x: 1.0 / x, 2, "func")  # rule contains the origin

    def test_project_unresolvable_oscillation(self):
        with pytest.raises(ConvergenceError):
            project(lambda x: np.cos(500.0 * x), 2, "func", max_doublings=3)

    def test_basis_and_degree_validation(self):
        with pytest.raises(DomainError):
            project(runge(1.0), 3, "chebyshev")
        with pytest.raises(DomainError):
            project(runge(1.0), -1)
        with pytest.raises(CapacityError):
            project(runge(1.0), 2001)


# ---------------------------------------------------------------------------
# evaluation and differentiation structure
# ---------------------------------------------------------------------------


class TestEvalDiff:
    def test_eval_scalar_in_scalar_out(self):
        v = eval_expansion([1.0, 0.5], 0.3, "poly")
        assert np.isscalar(v) or np.ndim(v) == 0

    def test_eval_complex_poly_argument(self):
        z = 1.0 + 1.0j
        got = eval_expansion([0.0, 0.0, 1.0], z, "poly")
        assert got == pytest.approx(4.0 * z * z - 2.0, rel=1e-14)

    def test_eval_func_rejects_complex(self):
        with pytest.raises(DomainError):
            eval_expansion([1.0], 1.0 + 1.0j, "func")

    def test_empty_coeffs_rejected(self):
        with pytest.raises(DomainError):
            eval_expansion([], 0.0, "poly")
        with pytest.raises(DomainError):
            differentiate([], 1, "poly")

    def test_func_clenshaw_matches_rows(self):
        x = np.array([-2.3, -0.4, 0.0, 1.1, 3.0])
        c = np.array([0.3, -1.1, 0.0, 0.45, 0.2])
        rows = hermite_function_rows(4, x)
        assert np.allclose(eval_expansion(c, x, "func"), c @ rows, atol=1e-14)

    @pytest.mark.parametrize("k", [0, 1, 4, 9])
    def test_hermite_ode_via_coefficient_maps(self, k):
        # H_k'' - 2x H_k' + 2k H_k = 0
        e = np.zeros(k + 1)
        e[k] = 1.0
        x = np.array([-1.7, 0.2, 0.9, 2.4])
        d1 = eval_expansion(differentiate(e, 1, "poly"), x, "poly")
        d2 = eval_expansion(differentiate(e, 2, "poly"), x, "poly")
        h = eval_expansion(e, x, "poly")
        resid = d2 - 2.0 * x * d1 + 2.0 * k * h
        assert np.max(np.abs(resid)) < 1e-10 * max(1.0, float(np.max(np.abs(h))))

    @pytest.mark.parametrize("k", [0, 1, 3, 8])
    def test_oscillator_equation_via_ladder(self, k):
        # psi_k'' = (x^2 - (2k+1)) psi_k
        e = np.zeros(k + 1)
        e[k] = 1.0
        x = np.array([-2.2, -0.6, 0.0, 0.8, 1.9])
        d2 = eval_expansion(differentiate(e, 2, "func"), x, "func")
        pk = eval_expansion(e, x, "func")
        assert np.allclose(d2, (x * x - (2 * k + 1)) * pk, atol=1e-12)

    def test_derivative_matches_finite_difference(self):
        c = project(runge(1.0), 14, "func")
        d = differentiate(c, 1, "func")
        h = 1e-5
        for x in (-1.1, 0.3, 0.9):
            fd = (eval_expansion(c, x + h, "func") - eval_expansion(c, x - h, "func")) / (2 * h)
            assert eval_expansion(d, x, "func") == pytest.approx(fd, abs=1e-8)

    def test_derivative_caps(self):
        with pytest.raises(CapacityError):
            differentiate([1.0, 2.0], 9, "poly")
        with pytest.raises(DomainError):
            differentiate([1.0], -1, "poly")

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(st.floats(-2, 2), min_size=1, max_size=7),
        st.floats(-3, 3),
    )
    def test_clenshaw_matches_direct_sum(self, coeffs, x):
        c = np.asarray(coeffs)
        direct = sum(c[k] * hermite_poly(k, x).materialize() for k in range(c.size))
        gross = sum(abs(c[k]) * abs(hermite_poly(k, x).materialize()) for k in range(c.size))
        got = eval_expansion(c, x, "poly")
        assert abs(got - direct) <= 1e-12 * max(gross, 1.0)


# ---------------------------------------------------------------------------
# argument scaling
# ---------------------------------------------------------------------------


class TestScaledArgument:
    def test_identity_scale(self):
        f = runge(1.0)
        g = with_scaled_argument(f, 1.0)
        x = np.linspace(-3, 3, 7)
        assert np.allclose(f(x), g(x))

    def test_gaussian_scaled_overlap(self):
        # expanding e^{-x^2/2} in the lam-scaled basis: leading coefficient
        # int psi_0(u) e^{-u^2/8} du = pi^{1/4} sqrt(8/5) at lam = 2
        g = with_scaled_argument(lambda x: np.exp(-0.5 * np.asarray(x) ** 2), 2.0)
        c = project(g, 2, "func")
        assert c[0] == pytest.approx(math.pi ** 0.25 * math.sqrt(8.0 / 5.0), rel=1e-12)

    def test_invalid_scale(self):
        with pytest.raises(DomainError):
            with_scaled_argument(runge(1.0), 0.0)
        with pytest.raises(DomainError):
            with_scaled_argument(runge(1.0), math.inf)


# ---------------------------------------------------------------------------
# contour coefficient route
# ---------------------------------------------------------------------------


class TestContourRoute:
    def test_matches_quadrature_projection(self):
        # same coefficients by two fully independent routes
        ns = list(range(0, 17, 2))
        scaled_contour = contour_coeff_scaled(runge(2.0), ns, 1.5, sigma=-2.0)
        c_proj = project(runge(2.0), 16, "poly")
        scaled_proj = c_proj[ns] * np.exp([log_coeff_normalizer(n) for n in ns])
        for sc, sp in zip(scaled_contour, scaled_proj):
            assert abs(sc.real - sp) <= 1e-9 * max(abs(sp), 1e-2)

    def test_odd_coefficients_of_even_function_vanish(self):
        ns = [1, 3, 11, 25]
        scaled = contour_coeff_scaled(runge(2.0), ns, 1.5, sigma=-2.0)
        assert np.max(np.abs(scaled)) < 1e-14

    def test_decay_rate_tracks_singularity_height(self):
        ns = list(range(0, 41, 2))
        scaled = contour_coeff_scaled(runge(2.0), ns, 1.5, sigma=-2.0)
        slope = np.polyfit(np.sqrt(2.0 * (np.array(ns) + 1.0)), np.log(np.abs(scaled)), 1)[0]
        assert slope == pytest.approx(-2.0, abs=0.1)

    def test_independent_of_contour_height(self):
        # the integrand is analytic between the two heights, so the
        # coefficient cannot depend on which is used
        a = contour_coeff_scaled(runge(2.0), [6], 0.7, sigma=-2.0)[0]
        b = contour_coeff_scaled(runge(2.0), [6], 1.8, sigma=-2.0)[0]
        assert abs(a - b) <= 1e-10 * abs(a)

    def test_truncation_guard(self):
        small = StripContour.uniform(1.5, 4.0, panels=16)
        with pytest.raises(TruncationError):
            contour_coeff_scaled(runge(2.0), [0], 1.5, contour=small)

    def test_degree_and_domain_checks(self):
        with pytest.raises(CapacityError):
            contour_coeff_scaled(runge(2.0), [401], 1.0)
        with pytest.raises(DomainError):
            contour_coeff_scaled(runge(2.0), [-1], 1.0)
        with pytest.raises(DomainError):
            auto_coeff_contour(-1.0, 5)
        assert contour_coeff_scaled(runge(2.0), [], 1.0).size == 0

    def test_normalizer_consistency(self):
        # c~_0 = c_0 * Gamma(1/2) sqrt(2 pi) = c_0 * pi * sqrt(2)
        assert log_coeff_normalizer(0) == pytest.approx(math.log(math.pi * math.sqrt(2.0)), abs=1e-13)
        got = contour_coeff_scaled(runge(2.0), [0], 1.5, sigma=-2.0)[0]
        c0 = contour_coeff(runge(2.0), 0, 1.5, sigma=-2.0)
        assert abs(got / (math.pi * math.sqrt(2.0)) - c0) < 1e-12 * abs(c0)
