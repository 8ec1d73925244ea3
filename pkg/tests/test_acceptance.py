"""Certification acceptance suite.

One test per headline claim the package certifies, each emitting a single
``[PASS]``/``[FAIL]`` line (written past pytest's capture so it shows up
in plain terminal output) before asserting.  Tolerances are stated inline;
reference values come from the independent oracles in ``oracles.py`` or
from closed forms, never from the code under test.

Rate conventions: decay fits report the rate r in ``exp(-r sqrt(2n))``
units.  Claims quoted per unit ``sqrt(n)`` are converted by ``sqrt(2)``.
"""

import math
import re
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from hermapprox.analysis import gh_error_contour
from hermapprox.approx import contour_coeff, project
from hermapprox.corpus import CORPUS
from hermapprox.experiments import ExperimentConfig, run_experiment
from hermapprox.genhermite import recurrence_coefficients
from hermapprox.specfun import kummer_u_half

from oracles import (
    gen_recurrence_oracle,
    mp_corpus_functions,
    mp_gh_remainder_oracle,
)

SQRT2 = math.sqrt(2.0)
_T0 = time.perf_counter()
_RECORD: list[tuple[str, bool]] = []
_CAPMAN = None


@pytest.fixture(autouse=True)
def _live_verdicts(request):
    # let the [PASS]/[FAIL] lines through pytest's output capture so they
    # show up in plain `pytest -v` runs
    global _CAPMAN
    _CAPMAN = request.config.pluginmanager.getplugin("capturemanager")
    yield


def _certify(name: str, passed: bool, detail: str) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}"
    if _CAPMAN is not None:
        with _CAPMAN.global_and_fixture_disabled():
            sys.stderr.write(line + "\n")
            sys.stderr.flush()
    else:
        print(line, file=sys.__stderr__)
    _RECORD.append((name, passed))
    assert passed, line


def _run(**kw):
    return run_experiment(ExperimentConfig(**kw))


def _contour_resolution(rho: float) -> float:
    # graded-contour feature scale matched to the gap between the shrunken
    # integration boundary and the nearest singularity
    return max(0.02 * rho, 1e-3)


# ---------------------------------------------------------------------------
# figure-level reproductions
# ---------------------------------------------------------------------------


def test_coefficient_decay_rates_recover_strip_heights():
    """Fitted coefficient-decay rates equal 1/5, 2 and 4 within 5%,
    measured over degrees 20..400, in at most 60 seconds."""
    t0 = time.perf_counter()
    got = {}
    for fn, expected in (("runge25", 0.2), ("gauss_pole4", 2.0), ("sech8", 4.0)):
        res = _run(method="coeff-decay", function=fn, n_min=20, n_max=400)
        got[fn] = (res.fits["coeff-poly-scaled"].rate, expected)
    elapsed = time.perf_counter() - t0
    ok = all(abs(r - e) / e <= 0.05 for r, e in got.values()) and elapsed <= 60.0
    detail = ", ".join(f"{fn} rate {r:.4f} (predicted {e:g})"
                       for fn, (r, e) in got.items())
    _certify("coefficient-decay-rates", ok,
             f"{detail}; tolerance 5%, elapsed {elapsed:.2f}s (limit 60s)")


def test_projection_error_rates():
    """Sup-norm projection error for the two strip-height-sqrt(2) targets
    decays like C n^p exp(-r sqrt(n)) with r = 2 +- 0.1 above the
    1e-13 saturation floor."""
    got = {}
    for fn in ("gauss_pole2", "sin3_branch"):
        res = _run(method="proj-error", function=fn, measure="max")
        fit = res.fits["proj-func-max"]
        got[fn] = (SQRT2 * fit.rate, fit.prefactor_power)
    ok = all(abs(r - 2.0) <= 0.1 for r, _ in got.values())
    detail = ", ".join(f"{fn} r={r:.4f} (algebraic power {p:+.2f})"
                       for fn, (r, p) in got.items())
    _certify("projection-error-rates", ok,
             f"{detail}; predicted 2 +- 0.1 per sqrt(n)")


def test_quadrature_error_rates():
    """Gauss-Hermite quadrature error for the two algebraic-branch targets
    decays like exp(-r sqrt(2n)) with r = 2 +- 0.1 (the doubled rate)."""
    got = {}
    for fn in ("invsqrt", "gauss_invsqrt"):
        res = _run(method="quad-error", function=fn)
        got[fn] = res.fits["quad"].rate
    ok = all(abs(r - 2.0) <= 0.1 for r in got.values())
    detail = ", ".join(f"{fn} r={r:.4f}" for fn, r in got.items())
    _certify("quadrature-error-rates", ok, f"{detail}; predicted 2 +- 0.1")


def test_scaled_basis_rates_and_dominance():
    """Dilating the basis by lambda multiplies the convergence rate by
    lambda (within 7%, increasing in lambda); past the Gaussian-class
    edge the lambda=5/2 error still sits below lambda=2 for n >= 50."""
    res = _run(method="scaling-sweep", function="scaled_target",
               lambda_list=(1.0, 1.5, 2.0, 2.5), rate_lambdas=(1.0, 1.5, 2.0))
    rates = {lam: res.fits[f"scaled-lam-{lam:g}"].rate for lam in (1.0, 1.5, 2.0)}
    rates_ok = all(abs(r - lam) / lam <= 0.07 for lam, r in rates.items())
    ordered = rates[1.0] < rates[1.5] < rates[2.0]

    by_lam = {}
    for row in res.rows:
        by_lam.setdefault(row.method, {})[row.n] = row.measured
    base, extra = by_lam["scaled-lam-2"], by_lam["scaled-lam-2.5"]
    compared = [n for n in base
                if n >= 50 and n in extra and base[n] > 1e-13]
    below = all(extra[n] < base[n] for n in compared)
    ok = rates_ok and ordered and bool(compared) and below
    detail = (", ".join(f"lam={lam:g}: {r:.4f}" for lam, r in rates.items())
              + f" (each +-7% of lam, increasing); lam=5/2 below lam=2 at "
              f"n={compared} above the 1e-13 floor")
    _certify("scaled-basis-rates", ok, detail)


# ---------------------------------------------------------------------------
# identity-level cross-checks
# ---------------------------------------------------------------------------


def test_coefficient_route_agreement():
    """For 1/(x^2+tau^2), tau in {1, 2}: boundary-contour coefficients,
    quadrature projection, and the confluent-hypergeometric closed form
    agree pairwise to relative 1e-7 for all degrees n <= 40."""
    worst = 0.0
    for tau, rho in ((1.0, 0.9), (2.0, 1.5)):
        f = lambda x: 1.0 / (np.asarray(x) ** 2 + tau * tau)
        proj = project(f, 40, "poly")
        for n in range(0, 41):
            cc = contour_coeff(f, n, rho, sigma=-2.0).real
            if n % 2:
                # odd coefficients vanish identically; the numeric routes
                # must sit at roundoff scale of the neighbouring even ones
                assert abs(cc) < 1e-14 and abs(proj[n]) < 1e-14
                continue
            cf = (math.cos(0.5 * math.pi * n) / (2.0 ** n * tau)) * \
                kummer_u_half(0.5 * (n + 1), tau * tau).materialize()
            scale = max(abs(cf), abs(cc), abs(proj[n]))
            worst = max(worst, abs(cf - cc) / scale, abs(cf - proj[n]) / scale,
                        abs(cc - proj[n]) / scale)
    _certify("coefficient-route-agreement", worst <= 1e-7,
             f"worst pairwise relative deviation {worst:.3e} (tolerance 1e-07)")


def test_quadrature_remainder_identity():
    """The boundary-contour reconstruction of I - Q_n matches a 50-digit
    direct computation to relative 1e-6 for every corpus function at
    n in {5, 10, 20, 40} wherever |I - Q_n| exceeds 1e-12."""
    mp_funcs = mp_corpus_functions()
    worst, checked, skipped = 0.0, 0, 0
    for name, spec in CORPUS.items():
        fmp = mp_funcs[name]
        sigma = spec.sigma_poly if spec.sigma_poly is not None else 0.0
        for n in (5, 10, 20, 40):
            direct = mp_gh_remainder_oracle(fmp, n)
            if abs(direct) <= 1e-12:
                skipped += 1
                continue
            cont = gh_error_contour(spec.evaluator, n, 0.98 * spec.rho,
                                    sigma=sigma,
                                    feature_scale=_contour_resolution(spec.rho))
            rel = float(abs(cont.real - direct) / abs(direct))
            worst = max(worst, rel)
            checked += 1
    _certify("quadrature-remainder-identity", checked > 0 and worst <= 1e-6,
             f"worst relative deviation {worst:.3e} over {checked} "
             f"(function, degree) pairs ({skipped} below the 1e-12 guard); "
             "tolerance 1e-06")


def test_bound_validity_across_corpus():
    """Every certified bound (coefficient magnitudes in both bases,
    sup-norm projection error, quadrature error) dominates its measured
    quantity at 1.5x the asymptotic constant for every corpus function
    and every measured degree in [10, 400] above the saturation floor."""
    fails, vacuous, worst = [], 0, (0.0, "")
    for name, spec in CORPUS.items():
        plans = [("coeff-decay", {"basis": "poly"}), ("quad-error", {})]
        if spec.sigma_func is not None:
            plans += [("coeff-decay", {"basis": "func"}),
                      ("proj-error", {"measure": "max"})]
        for method, extra in plans:
            res = _run(method=method, function=name, **extra)
            tag = f"{name}/{method}" + "".join(f"/{v}" for v in extra.values())
            check = {c.name: c for c in res.checks}.get("bound-validity")
            if check is None:
                peak = max((r.measured for r in res.rows
                            if r.n >= 10 and math.isfinite(r.measured)),
                           default=float("nan"))
                if peak > 1e-13:
                    fails.append(f"{tag}: no bound check despite measurable "
                                 f"errors (peak {peak:.2e})")
                else:
                    vacuous += 1  # e.g. a symmetric zero: all at roundoff
                continue
            if not check.passed:
                fails.append(f"{tag}: {check.detail}")
            ratio = float(re.search(r"= ([0-9.e+-]+) at", check.detail).group(1))
            if ratio > worst[0]:
                worst = (ratio, tag)
    _certify("bound-validity-sweep", not fails,
             f"worst measured/bound ratio {worst[0]:.3f} ({worst[1]}), "
             f"{vacuous} vacuous famil{'y' if vacuous == 1 else 'ies'}"
             + ("" if not fails else "; failures: " + "; ".join(fails)))


def test_cauchy_transform_cross_validation():
    """The weighted Cauchy transform evaluates identically (to 1e-8)
    through the direct, backward-recurrence, and imaginary-axis special-
    function routes, and its asymptotic-ratio deviation shrinks like
    N^{-1/2} (log-log slope -0.5 +- 0.2)."""
    res = _run(method="phi-validate", n_max=200)
    agree = [r.measured for r in res.rows
             if r.method == "phi-agreement" and math.isfinite(r.measured)]
    checks = {c.name: c for c in res.checks}
    trend = checks["asymptotic-trend"]
    ok = bool(agree) and max(agree) <= 1e-8 and trend.passed
    _certify("cauchy-transform-cross-validation", ok,
             f"worst three-route disagreement {max(agree):.3e} "
             f"(tolerance 1e-08); {trend.detail}")


def test_differentiation_rates():
    """Sup-norm error of the differentiated projection decays like
    n^{m/2+1/4} exp(-r sqrt(n)) with r = 2 +- 0.15 for m = 1, 2."""
    got = {}
    for m in (1, 2):
        res = _run(method="diff-error", function="gauss_pole2", m=m)
        got[m] = SQRT2 * res.fits["diff-max"].rate
    ok = all(abs(r - 2.0) <= 0.15 for r in got.values())
    detail = ", ".join(f"m={m}: r={r:.4f}" for m, r in got.items())
    _certify("differentiation-rates", ok, f"{detail}; predicted 2 +- 0.15")


def test_generalized_weight_suite():
    """|x|^{2mu} e^{-x^2} machinery: recurrence coefficients match an
    exact-arithmetic moment construction to 1e-10, the mu = 0 transform
    reduces to the classical one to 1e-7, and the asymptotic ratio
    approaches 1 with an N^{-1/2} trend."""
    worst_rec = 0.0
    for mu in (0.3, 1.7):
        ours = recurrence_coefficients(24, mu)
        ref = gen_recurrence_oracle(24, mu)
        for a, b in zip(ours, ref):
            worst_rec = max(worst_rec, abs(a - b) / abs(b))
    res = _run(method="genherm-validate", n_max=80)
    checks = {c.name: c for c in res.checks}
    ok = (worst_rec <= 1e-10 and checks["classical-reduction"].passed
          and checks["asymptotic-trend"].passed)
    _certify("generalized-weight-suite", ok,
             f"moment-construction deviation {worst_rec:.3e} (tolerance "
             f"1e-10); {checks['classical-reduction'].detail}; "
             f"{checks['asymptotic-trend'].detail}")


def test_suite_self_containment_and_runtime():
    """The certification suite needs nothing from the figure renderer and
    the acceptance module finishes well inside the 10-minute budget."""
    offenders = []
    for path in Path(__file__).parent.glob("*.py"):
        for i, line in enumerate(path.read_text().splitlines(), 1):
            if re.match(r"\s*(import|from)\s+frontend", line):
                offenders.append(f"{path.name}:{i}")
    elapsed = time.perf_counter() - _T0
    failed = [name for name, passed in _RECORD if not passed]
    ok = not offenders and elapsed <= 600.0 and not failed
    _certify("suite-self-containment-and-runtime", ok,
             f"{len(_RECORD) + 1} criteria, renderer imports: "
             f"{offenders or 'none'}, elapsed {elapsed:.1f}s (limit 600s)")
