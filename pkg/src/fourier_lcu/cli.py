"""Command-line interface.

Exit codes: 0 success, 2 bad arguments or input files, 3 numerical failure.
"""

import argparse
import sys

import numpy as np

from . import records
from .dense_linalg import spectral_norm
from .errors import FourierLCUError, NoBracket, NumericalFailure
from .fourier_extension import (
    ExtensionProblem,
    alpha_of,
    eta_for_m,
    eta_star,
    eta_star_residual,
    l2_error,
    sawtooth_coefficients,
    solve_least_squares,
)
from .lcu_engine import (
    assemble_block_encoding,
    build_decomposition,
    finite_difference_lcu,
    hermitian_split,
    series_error_bound,
    success_metrics,
    verify_encoding,
)
from .lindblad_sim import DemoParams, demo_propagator, run_demo
from .regularized_fit import (
    LAMBDA_PATH_MAX,
    LAMBDA_PATH_MIN,
    LAMBDA_PATH_POINTS,
    RegularizedProblem,
    default_schedule,
    pareto_sweep,
    path_endpoint,
    solve_regularized,
)

STRATEGY_CHOICES = ("least-squares", "regularized", "sawtooth")


def _strategy(name):
    return name.replace("-", "_")


def _emit(text, out):
    if out:
        records.write_text(out, text)
    else:
        sys.stdout.write(text)


def _coefficients(args, m, eta):
    strategy = _strategy(args.strategy)
    if strategy == "sawtooth":
        return sawtooth_coefficients(m)
    if strategy == "least_squares":
        return solve_least_squares(ExtensionProblem(m, eta))
    lam = getattr(args, "lam", None)
    if lam is not None:
        return solve_regularized(RegularizedProblem(m, eta, lam))
    return path_endpoint(m, eta)


def cmd_coeffs(args):
    eta = eta_for_m(args.m) if args.eta is None else args.eta
    coeffs = _coefficients(args, args.m, eta)
    eps, alpha = l2_error(coeffs), alpha_of(coeffs, 1.0)
    print(f"epsilon={eps:.6e} alpha={alpha:.10f}")
    if args.out:
        records.write_text(args.out, records.dumps(records.coefficient_record(coeffs, alpha, eps)))
    else:
        sys.stdout.write(records.dumps(records.coefficient_record(coeffs, alpha, eps)))
    return 0


def cmd_eta_opt(args):
    rows = []
    for m in args.m:
        try:
            root = eta_star(m)
        except NoBracket:
            root = float("nan")
        fit = eta_for_m(m)
        residual = eta_star_residual(m, root) if np.isfinite(root) else float("nan")
        rows.append((m, root, fit, residual))
    _emit(records.csv_text(("m", "eta_star", "eta_fit", "residual"), rows), args.out)
    return 0


def cmd_pareto(args):
    eta = eta_for_m(args.m) if args.eta is None else args.eta
    schedule = default_schedule(args.lambda_from, args.lambda_to, args.points)
    front = pareto_sweep(args.m, eta, schedule)
    text = records.pareto_csv(front)
    last = front.points[-1]
    if args.out:
        records.write_text(args.out, text)
        print(f"alpha at lambda={last.lam:.3e}: {last.alpha:.10f} (epsilon={last.epsilon:.6e})")
    else:
        sys.stdout.write(text)
    if any(p.flagged for p in front.points):
        print("warning: some points hit the iteration cap", file=sys.stderr)
        return 3
    return 0


def cmd_verify(args):
    a = records.parse_matrix(records.load_json(args.operator))
    eta = eta_for_m(args.m) if args.eta is None else args.eta
    coeffs = _coefficients(args, args.m, eta)
    decomp = build_decomposition(coeffs, a)
    enc = assemble_block_encoding(decomp)
    report = {
        "dim": enc.encoded_dim,
        "m": coeffs.m,
        "eta": coeffs.eta,
        "provenance": coeffs.provenance,
        "ancilla_count": enc.ancilla_count,
        "scale": decomp.split.scale,
        "tau": decomp.tau,
        "alpha": decomp.alpha,
        "epsilon": verify_encoding(enc, a),
        "series_bound": series_error_bound(decomp),
        "kappa_order": "per k: i*exp(-ik tau H1), -exp(-ik tau H2), -i*exp(ik tau H1), exp(ik tau H2)",
    }
    if args.state:
        psi = records.parse_vector(records.load_json(args.state))
        q, prob = success_metrics(decomp, psi)
        _, simulated = enc.postselect(psi / np.linalg.norm(psi))
        report.update({"q": q, "probability": prob, "simulated_probability": simulated})
    _emit(records.dumps(report), args.out)
    return 0


def cmd_demo(args):
    params = DemoParams(args.omega_hz, args.phi, args.t_phi, args.cycles)
    if args.export_propagator:
        matrix = records.matrix_record(demo_propagator(params))
        records.write_text(args.export_propagator, records.dumps(matrix))
    reports = [
        run_demo(params, _strategy(s), m) for s in args.strategies for m in args.m
    ]
    _emit(records.demo_csv(reports), args.out)
    return 0


def cmd_baseline(args):
    if args.operator:
        a = records.parse_matrix(records.load_json(args.operator))
    else:
        a = np.diag([0.5, -0.3]).astype(complex)
    hermitian_split(a)
    rows = []
    for p in args.orders:
        for tau in args.taus:
            err = spectral_norm(finite_difference_lcu(a, tau, p) - a)
            rows.append((p, float(tau), err))
    _emit(records.csv_text(("p", "tau", "error"), rows), args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="fourier-lcu", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="sine-series coefficients as a JSON record")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--eta", type=float)
    p.add_argument("--strategy", choices=STRATEGY_CHOICES, default="least-squares")
    lam = p.add_mutually_exclusive_group()
    lam.add_argument("--lambda", dest="lam", type=float)
    lam.add_argument("--lambda-path", action="store_true", help="terminal point of the default path")
    p.add_argument("--out")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("eta-opt", help="optimal extension factor per m")
    p.add_argument("--m", type=int, nargs="+", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eta_opt)

    p = sub.add_parser("pareto", help="error/subnormalisation front as CSV")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--eta", type=float)
    p.add_argument("--lambda-from", type=float, default=LAMBDA_PATH_MAX)
    p.add_argument("--lambda-to", type=float, default=LAMBDA_PATH_MIN)
    p.add_argument("--points", type=int, default=LAMBDA_PATH_POINTS)
    p.add_argument("--out")
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("verify", help="block-encode an operator and report its error")
    p.add_argument("--operator", required=True, help="JSON {dim, entries: [[re, im], ...]}")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--eta", type=float)
    p.add_argument("--strategy", choices=STRATEGY_CHOICES, default="least-squares")
    p.add_argument("--state", help="JSON [[re, im], ...] input state")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", help="driven-dephasing qubit benchmark as CSV")
    p.add_argument("--omega-hz", type=float, default=1e5)
    p.add_argument("--phi", type=float, default=np.pi / 4)
    p.add_argument("--t-phi", type=float, default=1.0)
    p.add_argument("--cycles", type=float, default=500.0)
    p.add_argument("--m", type=int, nargs="+", default=[1, 2, 4, 8, 16])
    p.add_argument(
        "--strategies", nargs="+", choices=STRATEGY_CHOICES[:2], default=["least-squares"]
    )
    p.add_argument("--export-propagator")
    p.add_argument("--out")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("baseline", help="finite-difference LCU error versus tau")
    p.add_argument("--operator")
    p.add_argument("--orders", type=int, nargs="+", default=[2, 4, 6, 8])
    p.add_argument("--taus", type=float, nargs="+", default=[0.2, 0.1, 0.05, 0.025])
    p.add_argument("--out")
    p.set_defaults(func=cmd_baseline)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalFailure as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (FourierLCUError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
