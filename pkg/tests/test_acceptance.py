"""Acceptance criteria, one test and one summary line each."""

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from fourier_lcu.dense_linalg import expm_general, spectral_norm
from fourier_lcu.fourier_extension import (
    TABLE_FIXTURE,
    CoefficientSet,
    ExtensionProblem,
    alpha_of,
    build_normal_system,
    closed_form_system,
    eta_for_m,
    eta_star,
    eta_star_residual,
    l2_error,
    sm_and_derivative,
    solve_least_squares,
)
from fourier_lcu.lcu_engine import (
    apply_lcu_sum,
    assemble_block_encoding,
    build_decomposition,
    finite_difference_as_fourier,
    finite_difference_lcu,
)
from fourier_lcu.lindblad_sim import (
    DemoParams,
    LindbladSystem,
    build_liouvillian,
    run_demo,
    unvec,
    vec,
)
from fourier_lcu.regularized_fit import (
    RegularizedProblem,
    check_monotonicity,
    path_endpoint,
    solve_regularized,
)

from conftest import random_contraction, random_matrix

pytestmark = pytest.mark.acceptance


def ls(m, eta=None):
    return solve_least_squares(ExtensionProblem(m, eta_for_m(m) if eta is None else eta))


def test_01_ls_reference(verdict, ls_reference):
    checks = []
    for m in (1, 2, 4, 8, 16):
        diff = float(np.max(np.abs(ls(m).coefficients - ls_reference[m])))
        checks.append((f"m={m} max|da|={diff:.1e}<=1e-10", diff <= 1e-10))
    verdict(1, "Least-squares reference coefficients", checks)


def test_02_exponential_convergence(verdict):
    ms = np.array([1, 2, 4, 8, 16])
    errs = np.array([l2_error(ls(m)) for m in ms])
    slope, icpt = np.polyfit(ms, np.log(errs), 1)
    resid = np.log(errs) - (slope * ms + icpt)
    r2 = 1 - resid.var() / np.log(errs).var()
    verdict(2, "Exponential convergence", [
        (f"monotone {np.all(np.diff(errs) < 0)}", bool(np.all(np.diff(errs) < 0))),
        (f"log-linear slope={slope:.3f} R2={r2:.4f}", slope < 0 and r2 > 0.95),
        (f"error(16)={errs[-1]:.2e}<=1e-12", errs[-1] <= 1e-12),
    ])


def test_03_subnormalisation_scale(verdict):
    alpha = alpha_of(ls(16), 1.0)
    alphas = [alpha_of(ls(m)) for m in range(1, 17)]
    sublinear = alphas[-1] / alphas[0] < 16
    verdict(3, "Subnormalisation scale", [
        (f"alpha(16)={alpha:.4f} in [4,6]", 4 <= alpha <= 6),
        (f"alpha(1..16) increasing, sublinear, max={max(alphas):.3f}<=6",
         bool(np.all(np.diff(alphas) > 0)) and sublinear and max(alphas) <= 6),
    ])


def test_04_eta_star(verdict):
    checks = []
    for m in (1, 2, 4, 8, 16):
        root = eta_star(m)
        gap = abs(root - eta_for_m(m))
        res = abs(eta_star_residual(m, root))
        checks.append((f"m={m} eta*={root:.5f} |gap|={gap:.4f} res={res:.0e}", gap <= 0.05 and res < 1e-6))
    verdict(4, "eta* proximity", checks)


def test_05_regularized_reference(verdict, regularized_reference):
    checks = []
    for m in (8, 16, 32, 64):
        eta = eta_for_m(m)
        ours = path_endpoint(m, eta)
        ref = CoefficientSet(m, eta, regularized_reference[m], TABLE_FIXTURE)
        e_ratio = l2_error(ours) / l2_error(ref)
        a_ratio = alpha_of(ours) / alpha_of(ref)
        big = np.abs(ref.coefficients) > 1e-3
        coef = float(np.max(np.abs(ours.coefficients[big] - ref.coefficients[big])))
        checks.append((f"m={m} eps ratio {e_ratio:.3f} (5%)", abs(e_ratio - 1) <= 0.05))
        checks.append((f"m={m} alpha ratio {a_ratio:.4f} (1%)", abs(a_ratio - 1) <= 0.01))
        checks.append((f"m={m} big coeffs {coef:.1e}<=1e-4", coef <= 1e-4))
    verdict(5, "Regularized reference front", checks)


def test_06_monotonicity(verdict):
    j = check_monotonicity(2.0, 1e-4, [2, 4, 8, 16, 32])
    a = check_monotonicity(2.0, 1e-4, [8, 16, 32, 64], budget=1e-3)
    alphas = np.array(a.alphas)
    spread = abs(alphas[-1] - alphas[-2]) / alphas[-2]
    verdict(6, "Optimal cost monotone in m", [
        (f"J* non-increasing {np.round(j.objectives, 6).tolist()}", not j.violations),
        (f"alpha*(1e-3) non-increasing {np.round(alphas, 4).tolist()}",
         not [v for v in a.violations if v[0] == "alpha"]),
        (f"last two alpha* within {spread:.3%} (2%)", spread <= 0.02),
    ])


def test_07_redundancy(verdict):
    alpha_ls2 = alpha_of(ls(2))
    checks = []
    for m in (32, 64):
        alpha = alpha_of(path_endpoint(m, eta_for_m(m)))
        checks.append((f"alpha(m={m})={alpha:.4f} < alpha_LS(2)={alpha_ls2:.4f}", alpha < alpha_ls2))
    for m in range(1, 7):
        reg = path_endpoint(m, 2.0).coefficients
        diff = float(np.max(np.abs(reg - ls(m, 2.0).coefficients)))
        checks.append((f"eta=2 m={m} |reg-LS|={diff:.1e}<=1e-8", diff <= 1e-8))
    verdict(7, "Redundancy arbitrage", checks)


def test_08_block_encoding(verdict, rng):
    coeff = {m: ls(m) for m in (4, 16)}
    worst_u = worst_block = worst_eps = 0.0
    for i in range(20):
        a = random_contraction(rng, 4)
        for m in (4, 16):
            d = build_decomposition(coeff[m], a)
            enc = assemble_block_encoding(d)
            u = enc.unitary
            worst_u = max(worst_u, np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
            worst_block = max(worst_block, np.max(np.abs(enc.block() - apply_lcu_sum(d) / d.alpha)))
            if m == 16:
                worst_eps = max(worst_eps, spectral_norm(a - d.alpha * enc.block()))
    verdict(8, "Block-encoding correctness", [
        (f"unitarity {worst_u:.1e}<=1e-11", worst_u <= 1e-11),
        (f"block=sum/alpha {worst_block:.1e}<=1e-11", worst_block <= 1e-11),
        (f"m=16 eps {worst_eps:.1e}<=1e-10", worst_eps <= 1e-10),
    ])


def test_09_baselines(verdict, rng):
    a = np.diag([0.5, -0.3]).astype(complex)
    e1 = spectral_norm(finite_difference_lcu(a, 0.1, 2) - a)
    e2 = spectral_norm(finite_difference_lcu(a, 0.05, 2) - a)
    worst = 0.0
    for p in (2, 4, 6, 8):
        for _ in range(3):
            b = random_contraction(rng, 3)
            d = build_decomposition(finite_difference_as_fourier(p), b, tau=0.1)
            worst = max(worst, np.max(np.abs(apply_lcu_sum(d) - finite_difference_lcu(b, 0.1, p))))
    verdict(9, "Finite-difference baselines", [
        (f"p=2 halving ratio {e1 / e2:.3f} in [3.2,4.8]", 3.2 <= e1 / e2 <= 4.8),
        (f"difference form = Fourier form {worst:.1e}<=1e-13", worst <= 1e-13),
    ])


def test_10_lindblad_demo(verdict):
    params = DemoParams()
    least = {m: run_demo(params, "least_squares", m) for m in (1, 2, 4, 8, 16)}
    reg = {m: run_demo(params, "regularized", m) for m in (16, 32, 64)}
    delta = least[1].unitarity_defect
    errs = [least[m].statevector_error for m in sorted(least)]
    fourier16 = l2_error(ls(16))
    bound = delta * 10 * fourier16
    plateau = [reg[m].statevector_error for m in sorted(reg)]
    ratio = least[8].alpha / reg[16].alpha
    verdict(10, "Lindblad demo", [
        (f"delta_U={delta:.5f} in [3e-3,3e-2]", 3e-3 <= delta <= 3e-2),
        (f"LS errors decreasing {np.all(np.diff(errs) < 0)}", bool(np.all(np.diff(errs) < 0))),
        (f"LS err(16)={errs[-1]:.2e} <= dU*10*eps16={bound:.2e}", errs[-1] <= bound),
        (f"regularized plateau {[f'{e:.1e}' for e in plateau]} in [1e-6,1e-4]",
         all(1e-6 <= e <= 1e-4 for e in plateau)),
        (f"alpha_LS(8)/alpha_reg(16)={ratio:.3f} in [1.5,2.0]", 1.5 <= ratio <= 2.0),
    ])


def test_11_oracles(verdict, rng):
    worst_g = 0.0
    for m in (1, 4, 16, 32, 64):
        for eta in (1.5, 2.0, 2.46):
            p = ExtensionProblem(m, eta)
            q, c = build_normal_system(p), closed_form_system(p)
            worst_g = max(worst_g, np.max(np.abs(q.gram - c.gram)), np.max(np.abs(q.rhs - c.rhs)))
    worst_s = 0.0
    for m, eta in ((1, 2.0), (4, 2.2), (8, 2.3)):
        _, ds = sm_and_derivative(ExtensionProblem(m, eta))
        h = 1e-5
        fd = (ls(m, eta + h).l1 - ls(m, eta - h).l1) / (2 * h)
        worst_s = max(worst_s, abs(ds - fd))
    mat = random_matrix(rng, 4) * 0.5
    x0 = rng.normal(size=4) + 1j * rng.normal(size=4)
    sol = solve_ivp(lambda t, x: mat @ x, (0, 1.0), x0, method="DOP853", rtol=1e-12, atol=1e-14)
    worst_e = float(np.max(np.abs(expm_general(mat) @ x0 - sol.y[:, -1])))
    worst_l = 0.0
    for _ in range(10):
        h = random_matrix(rng, 2, hermitian=True)
        ops = (random_matrix(rng, 2), random_matrix(rng, 2))
        system = LindbladSystem(h, ops, 1.0)
        rho = random_matrix(rng, 2)
        lhs = unvec(build_liouvillian(system) @ vec(rho))
        worst_l = max(worst_l, np.max(np.abs(lhs - system.rhs(rho))))
    verdict(11, "Oracle equivalences", [
        (f"quadrature vs closed form {worst_g:.1e}<=1e-12", worst_g <= 1e-12),
        (f"S' vs finite difference {worst_s:.1e}<=1e-6", worst_s <= 1e-6),
        (f"expm vs ODE {worst_e:.1e}<=1e-8", worst_e <= 1e-8),
        (f"Liouvillian vs matrix form {worst_l:.1e}<=1e-12", worst_l <= 1e-12),
    ])
