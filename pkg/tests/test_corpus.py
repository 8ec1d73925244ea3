"""Tests for the built-in function corpus.

Each entry is checked against an independent scalar reimplementation from
``math``, its declared symmetry, and its closed-form Gaussian-weighted
integral (via the erfc oracle: int e^{-s x^2}/(x^2+t^2) dx =
(pi/t) e^{s t^2} erfc(sqrt(s) t)).
"""

import math

import numpy as np
import pytest

from hermapprox.corpus import (
    CORPUS,
    FunctionSpec,
    _gaussian_rational_integral,
    corpus_names,
    get_function,
)
from hermapprox.exceptions import DomainError
from hermapprox.hermite import gauss_hermite_rule

from oracles import erfc_oracle


SPOT_CHECKS = {
    # name -> (x, independently computed value)
    "runge25": (0.2, 0.5),
    "gauss_pole4": (0.5, math.exp(-0.25) / 4.25),
    "sech8": (0.5, 1.0 / math.cosh(math.pi * 0.5 / 8.0)),
    "gauss_pole2": (1.0, math.exp(-1.0) / 3.0),
    "sin3_branch": (0.5, math.exp(-0.125) * math.sin(1.5) / 1.5),
    "invsqrt": (1.3, 1.0 / math.sqrt(1.0 + 1.69)),
    "gauss_invsqrt": (0.5, math.exp(-0.25) / math.sqrt(1.25)),
    "scaled_target": (0.5, math.exp(-0.5) / 1.25),
}


class TestRegistry:
    def test_names_sorted_by_registration(self):
        assert corpus_names() == list(CORPUS)
        assert len(CORPUS) == 8

    def test_get_function_roundtrip(self):
        for name in corpus_names():
            spec = get_function(name)
            assert isinstance(spec, FunctionSpec)
            assert spec.name == name
            assert spec.label

    def test_unknown_name(self):
        with pytest.raises(DomainError, match="runge25"):
            get_function("no_such_function")


class TestEvaluators:
    @pytest.mark.parametrize("name", list(SPOT_CHECKS))
    def test_spot_value(self, name):
        x, expected = SPOT_CHECKS[name]
        spec = get_function(name)
        assert spec(np.array([x]))[0] == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("name", list(CORPUS))
    def test_parity(self, name):
        spec = get_function(name)
        x = np.linspace(0.1, 3.0, 7)
        sign = {"even": 1.0, "odd": -1.0}[spec.parity]
        assert np.allclose(spec(-x), sign * spec(x), rtol=1e-14, atol=1e-300)

    @pytest.mark.parametrize("name", list(CORPUS))
    def test_schwarz_symmetry(self, name):
        # real-valued on the axis extends with f(conj z) = conj f(z)
        spec = get_function(name)
        z = np.array([0.3 + 0.11j, -1.2 + 0.45j * min(spec.rho, 1.0)])
        left = spec(np.conj(z))
        right = np.conj(spec(z))
        assert np.allclose(left, right, rtol=1e-13)

    @pytest.mark.parametrize("name", list(CORPUS))
    def test_analytic_inside_declared_strip(self, name):
        spec = get_function(name)
        line = np.linspace(-6.0, 6.0, 31) + 1j * (0.95 * spec.rho)
        vals = spec(line)
        assert np.all(np.isfinite(vals))

    @pytest.mark.parametrize(
        "name,scale",
        [("runge25", 50.0), ("gauss_pole4", 50.0), ("gauss_pole2", 50.0), ("sech8", 200.0)],
    )
    def test_blows_up_at_singularity_height(self, name, scale):
        spec = get_function(name)
        near = abs(spec(np.array([1j * 0.999 * spec.rho]))[0])
        at_zero = abs(spec(np.array([0.0]))[0])
        assert near > scale * at_zero

    @pytest.mark.parametrize("name", ["invsqrt", "gauss_invsqrt", "sin3_branch"])
    def test_branch_points_stay_large_but_finite(self, name):
        spec = get_function(name)
        v = spec(np.array([1j * 0.9999 * spec.rho]))[0]
        assert np.isfinite(v)
        assert abs(v) > 5.0 * abs(spec(np.array([0.0]))[0])


class TestClosedForms:
    def test_gaussian_rational_integral_vs_erfc(self):
        for s, tau in [(1.0, 0.2), (2.0, 2.0), (3.0, 1.0), (2.0, math.sqrt(2.0))]:
            expected = (math.pi / tau) * math.exp(s * tau * tau) * erfc_oracle(math.sqrt(s) * tau)
            assert _gaussian_rational_integral(s, tau) == pytest.approx(expected, rel=1e-13)

    @pytest.mark.parametrize(
        "name", [n for n in CORPUS if CORPUS[n].weighted_integral is not None]
    )
    def test_weighted_integral_matches_big_rule(self, name):
        spec = get_function(name)
        rule = gauss_hermite_rule(1500)
        est = float(np.exp(rule.log_weights) @ spec(rule.nodes))
        assert est == pytest.approx(spec.weighted_integral, rel=3e-9, abs=1e-14)


class TestDerivatives:
    def test_gauss_pole2_first_derivative(self):
        spec = get_function("gauss_pole2")
        d1 = spec.derivatives[1]
        h = 1e-5
        for x in [-1.1, 0.0, 0.7, 2.3]:
            fd = (spec(np.array([x + h]))[0] - spec(np.array([x - h]))[0]) / (2.0 * h)
            assert d1(np.array([x]))[0] == pytest.approx(fd, rel=2e-9, abs=1e-11)

    def test_gauss_pole2_second_derivative(self):
        spec = get_function("gauss_pole2")
        d1, d2 = spec.derivatives[1], spec.derivatives[2]
        h = 1e-6
        for x in [-0.8, 0.0, 0.7, 1.9]:
            fd = (d1(np.array([x + h]))[0] - d1(np.array([x - h]))[0]) / (2.0 * h)
            assert d2(np.array([x]))[0] == pytest.approx(fd, rel=5e-9, abs=1e-10)

    def test_derivatives_share_symmetries(self):
        spec = get_function("gauss_pole2")
        x = np.linspace(0.2, 2.5, 6)
        assert np.allclose(spec.derivatives[1](-x), -spec.derivatives[1](x), rtol=1e-13)
        assert np.allclose(spec.derivatives[2](-x), spec.derivatives[2](x), rtol=1e-13)
