"""Special functions: frozen values, oracle comparisons, invariants."""

import math

import numpy as np
import pytest

from hermapprox import DomainError, faddeeva, kummer_u_half, log_gamma

from oracles import (
    erfc_oracle,
    factorial_log_oracle,
    gaussian_cauchy_oracle,
    half_integer_log_gamma_oracle,
)

SQRT_PI = math.sqrt(math.pi)


# ---------------------------------------------------------------------------
# log_gamma
# ---------------------------------------------------------------------------


def test_log_gamma_frozen_values():
    # Gamma(1/2) = sqrt(pi); Gamma(10) = 9! = 362880 (factorial oracle)
    assert math.isclose(log_gamma(0.5), 0.5723649429247001, rel_tol=1e-13)
    assert math.isclose(log_gamma(10.0), 12.801827480081469, rel_tol=1e-13)
    assert math.isclose(log_gamma(10.0), factorial_log_oracle(9), rel_tol=1e-14)


def test_log_gamma_vs_factorial_oracle():
    for n in range(1, 171):
        assert math.isclose(log_gamma(float(n)), factorial_log_oracle(n - 1), rel_tol=1e-13, abs_tol=1e-13)


def test_log_gamma_vs_half_integer_oracle():
    for n in range(0, 160):
        assert math.isclose(
            log_gamma(n + 0.5), half_integer_log_gamma_oracle(n), rel_tol=1e-12, abs_tol=1e-12
        )


def test_log_gamma_recurrence_property():
    # Gamma(x+1) = x Gamma(x)  =>  log_gamma(x+1) - log_gamma(x) = log x
    for x in np.linspace(0.5, 160.0, 640):
        lhs = log_gamma(float(x) + 1.0) - log_gamma(float(x))
        assert math.isclose(lhs, math.log(x), rel_tol=0, abs_tol=5e-13 * max(1.0, abs(math.log(x))) + 1e-12)


def test_log_gamma_monotone_from_two():
    xs = np.linspace(2.0, 170.0, 2000)
    vals = np.array([log_gamma(float(x)) for x in xs])
    assert np.all(np.diff(vals) > 0)


def test_log_gamma_domain_errors():
    for bad in (0.0, -1.0, -0.5, math.nan, math.inf):
        with pytest.raises(DomainError):
            log_gamma(bad)


# ---------------------------------------------------------------------------
# faddeeva
# ---------------------------------------------------------------------------


def test_faddeeva_frozen_values():
    # w(i) = e * erfc(1), w(10i) = e^100 erfc(10); erfc from the independent oracle
    w1 = faddeeva(1j)
    assert abs(w1.imag) < 1e-14
    assert math.isclose(w1.real, math.e * erfc_oracle(1.0), rel_tol=1e-12)
    assert math.isclose(w1.real, 0.42758357615580705, rel_tol=1e-12)
    w10 = faddeeva(10j)
    assert math.isclose(w10.real, 0.056140992743823545, rel_tol=1e-12)


def test_faddeeva_imaginary_axis_vs_erfc_oracle():
    for y in np.linspace(0.05, 12.0, 80):
        w = faddeeva(1j * float(y))
        ref = math.exp(min(y * y, 700.0)) * erfc_oracle(float(y)) if y < 25 else None
        assert abs(w.imag) < 1e-14 * abs(w.real)
        assert math.isclose(w.real, ref, rel_tol=1e-12)


def test_faddeeva_off_axis_vs_cauchy_quadrature_oracle():
    # w(z) = 2i * (Cauchy transform of the Gaussian at z) * ... ; precisely
    # (1/(2 pi i)) int e^{-t^2}/(z-t) dt = -w(z)/2 for Im z > 0.
    for z in (0.3 + 0.7j, -1.2 + 0.4j, 2.5 + 2.5j, -4.0 + 0.1j, 0.05 + 3.3j):
        ref = -2.0 * gaussian_cauchy_oracle(z)
        assert abs(faddeeva(z) - ref) <= 1e-11 * abs(ref)


def test_faddeeva_contract_grid_against_scipy():
    # extra cross-check with an unrelated mature implementation
    wofz = pytest.importorskip("scipy.special").wofz
    rng = np.random.default_rng(42)
    z = rng.uniform(-10, 10, 500) + 1j * rng.uniform(0, 10, 500)
    ours = np.array([faddeeva(complex(v)) for v in z])
    ref = wofz(z)
    assert np.max(np.abs(ours - ref) / np.abs(ref)) < 1e-12


def test_faddeeva_positive_decreasing_on_imaginary_axis():
    ys = np.linspace(0.0, 25.0, 400)
    vals = np.array([faddeeva(1j * float(y)).real for y in ys])
    assert np.all(vals > 0)
    assert np.all(np.diff(vals) < 0)


def test_faddeeva_rejects_lower_half_plane():
    with pytest.raises(DomainError):
        faddeeva(1.0 - 0.1j)
    with pytest.raises(DomainError):
        faddeeva(complex(math.nan, 1.0))


# ---------------------------------------------------------------------------
# kummer_u_half
# ---------------------------------------------------------------------------


def test_kummer_frozen_erfc_identities():
    # U(1/2, 1/2, x^2) = sqrt(pi) e^{x^2} erfc(x)
    u1 = kummer_u_half(0.5, 1.0).materialize_real()
    assert math.isclose(u1, SQRT_PI * math.e * erfc_oracle(1.0), rel_tol=1e-10)
    assert math.isclose(u1, 0.7578721561413121, rel_tol=1e-10)
    u4 = kummer_u_half(0.5, 4.0).materialize_real()
    assert math.isclose(u4, SQRT_PI * math.exp(4.0) * erfc_oracle(2.0), rel_tol=1e-10)
    assert math.isclose(u4, 0.4526770499811746, rel_tol=1e-10)


def test_kummer_erfc_identity_sweep():
    for x in np.linspace(0.15, 9.0, 40):
        u = kummer_u_half(0.5, float(x) ** 2)
        ref = math.log(SQRT_PI * erfc_oracle(float(x))) + x * x
        assert abs(u.log_mag - ref) < 1e-10 * max(1.0, abs(ref))


def test_kummer_contiguous_recurrence_property():
    # U(a-1,b,z) + (b - 2a - z) U(a,b,z) + a (a + 1 - b) U(a+1,b,z) = 0
    for a in (1.5, 3.0, 7.5, 20.0, 41.5):
        for z in (0.05, 0.7, 4.0, 30.0, 90.0):
            um = kummer_u_half(a - 1.0, z).materialize_real()
            u0 = kummer_u_half(a, z).materialize_real()
            up = kummer_u_half(a + 1.0, z).materialize_real()
            resid = um + (0.5 - 2 * a - z) * u0 + a * (a + 0.5) * up
            scale = abs(um) + abs((0.5 - 2 * a - z) * u0) + abs(a * (a + 0.5) * up)
            assert abs(resid) < 5e-10 * scale


def test_kummer_vs_mpmath_grid():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    rng = np.random.default_rng(7)
    for _ in range(60):
        a = float(rng.uniform(0.05, 60.0))
        x = float(rng.uniform(0.01, 100.0))
        ours = kummer_u_half(a, x)
        ref = mp.log(mp.hyperu(mp.mpf(a), mp.mpf(1) / 2, mp.mpf(x)))
        assert abs(ours.log_mag - float(ref)) < 1e-10 * max(1.0, abs(float(ref)))


def test_kummer_positive_decreasing_in_x():
    for a in (0.5, 2.5, 14.0, 60.0):
        xs = np.linspace(0.01, 100.0, 60)
        logs = np.array([kummer_u_half(a, float(x)).log_mag for x in xs])
        assert np.all(np.isfinite(logs))
        assert np.all(np.diff(logs) < 0)


def test_kummer_large_x_asymptote():
    # U(a, 1/2, x) ~ x^{-a} within 1% once x >= 1e4 * a
    for a in (0.5, 3.0, 17.0, 60.0):
        x = 1.0e4 * a
        u = kummer_u_half(a, x)
        assert abs(u.log_mag - (-a * math.log(x))) < math.log(1.01)


def test_kummer_domain_errors():
    for a, x in ((0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -2.0)):
        with pytest.raises(DomainError):
            kummer_u_half(a, x)
