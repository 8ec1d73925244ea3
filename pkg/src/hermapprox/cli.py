"""Command-line interface for the experiment runner.

Every subcommand produces the shared CSV schema
(``n, measured, bound, rate_ref, method`` plus a ``# footer-json:``
trailer) on stdout or at ``--out``, prints one PASS/FAIL line per
certification to stderr, and exits 0 only when every certification in
the run passed.  Exit codes: 0 all checks pass, 1 a check failed,
2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import sys

from .exceptions import HermapproxError
from .experiments import (
    METHODS,
    ExperimentConfig,
    config_from_json,
    run_experiment,
)

_DESCRIPTIONS = {
    "coeff-decay": "expansion-coefficient magnitudes vs the root-exponential envelope",
    "proj-error": "truncated-projection error decay",
    "interp-error": "grid-interpolation error decay",
    "quad-error": "Gaussian-quadrature error decay (doubled rate)",
    "diff-error": "error decay of differentiated projections",
    "scaling-sweep": "argument-scaled basis: one error curve per scale factor",
    "phi-validate": "cross-route validation of the weighted Cauchy transform",
    "genherm-validate": "validation suite for the generalized-weight transform",
}

# capacity- and accuracy-based per-method degree caps for the two
# validation suites (the generalized transform is certified to 80)
_N_MAX_DEFAULT = {"phi-validate": 200, "genherm-validate": 64}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hermapprox",
        description="Certified root-exponential convergence experiments "
        "for Hermite spectral approximation.",
    )
    sub = parser.add_subparsers(dest="method", required=True, metavar="command")
    for method in METHODS:
        p = sub.add_parser(method, help=_DESCRIPTIONS[method])
        p.set_defaults(**{})
        p.add_argument(
            "--function",
            default=argparse.SUPPRESS,
            help="builtin function id or an expression in x "
            "(e.g. 'exp(-x^2)/(4+x^2)')",
        )
        p.add_argument(
            "--rho", type=float, default=argparse.SUPPRESS,
            help="strip half-height (required for expression functions; "
            "overrides builtin metadata)",
        )
        p.add_argument(
            "--sigma", type=float, default=argparse.SUPPRESS,
            help="algebraic growth exponent of f along the strip boundary",
        )
        p.add_argument(
            "--n-min", dest="n_min", type=int, default=argparse.SUPPRESS,
            help="smallest degree in the ladder (default 4)",
        )
        p.add_argument(
            "--n-max", dest="n_max", type=int, default=argparse.SUPPRESS,
            help="largest degree in the ladder (default 400; "
            "200/64 for the validation suites)",
        )
        p.add_argument(
            "--basis", choices=("poly", "func"), default=argparse.SUPPRESS,
            help="expansion family: weighted polynomials or orthonormal functions",
        )
        p.add_argument(
            "--measure", choices=("max", "l2"), default=argparse.SUPPRESS,
            help="error norm for projection/interpolation/differentiation runs",
        )
        p.add_argument(
            "--out", dest="output_path", default=argparse.SUPPRESS,
            help="write the CSV here instead of stdout",
        )
        p.add_argument(
            "--config", dest="config_path", default=argparse.SUPPRESS,
            help="JSON file mirroring the config fields; explicit flags win",
        )
        if method == "diff-error":
            p.add_argument(
                "--m", type=int, default=argparse.SUPPRESS,
                help="derivative order (default 1)",
            )
        if method == "genherm-validate":
            p.add_argument(
                "--mu", type=float, default=argparse.SUPPRESS,
                help="weight exponent of |x|^(2 mu) e^(-x^2) (default 0.3)",
            )
        if method == "scaling-sweep":
            p.add_argument(
                "--lambda", dest="lambda_list", type=float, action="append",
                default=argparse.SUPPRESS, metavar="LAM",
                help="scale factor to sweep (repeatable; default 1, 1.5, 2)",
            )
            p.add_argument(
                "--rate-lambda", dest="rate_lambdas", type=float, action="append",
                default=argparse.SUPPRESS, metavar="LAM",
                help="scale factors whose rate law is certified "
                "(repeatable; default: all swept factors)",
            )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    method = args.pop("method")
    config_path = args.pop("config_path", None)
    for key in ("lambda_list", "rate_lambdas"):
        if key in args:
            args[key] = tuple(args[key])

    defaults = {}
    if method in _N_MAX_DEFAULT:
        defaults["n_max"] = _N_MAX_DEFAULT[method]
    try:
        if config_path is not None:
            config = config_from_json(config_path, defaults=defaults, method=method, **args)
        else:
            config = ExperimentConfig(method=method, **{**defaults, **args})
        result = run_experiment(config)
    except HermapproxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if not config.output_path:
        sys.stdout.write(result.csv_text())
    for note in result.notes:
        print(f"[note] {note}", file=sys.stderr)
    for check in result.checks:
        tag = "PASS" if check.passed else "FAIL"
        print(f"[{tag}] {check.name}: {check.detail}", file=sys.stderr)
    verdict = "all certifications passed" if result.passed else "certification FAILED"
    print(
        f"{config.method}: {verdict} "
        f"({sum(c.passed for c in result.checks)}/{len(result.checks)} checks)",
        file=sys.stderr,
    )
    return 0 if result.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
