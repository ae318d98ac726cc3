"""L1-regularised sine fits and the error/subnormalisation Pareto front.

The objective is

    J(a) = ||t - Phi a||_2 + lam * (2 eta / pi) * ||a||_1

with the L2 norm taken on [-pi/eta, pi/eta] through Gauss-Legendre weights.
It is solved through the squared surrogate

    0.5 ||t - Phi a||^2 + mu * (2 eta / pi) * ||a||_1

whose minimiser a(mu) also minimises J exactly when mu = lam * eps(a(mu)).
The surrogate is handled in two phases: a FISTA warm start (compiled kernel)
that identifies the support, then an active-set feature-sign polish that
solves the KKT system on the support exactly. The outer multiplier is found
by Brent's method in log mu.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg
from scipy.optimize import brentq

from . import kernels
from .errors import Infeasible, NoBracket, NonConvergence
from .fourier_extension import (
    REGULARIZED,
    CoefficientSet,
    ExtensionProblem,
    alpha_of,
    l2_error,
    weighted_design,
)

MAX_ITER = 200000
FISTA_ITER = 500
LAMBDA_PATH_MAX = 1.0
LAMBDA_PATH_MIN = 1e-4
LAMBDA_PATH_POINTS = 40
FRONT_TOL = 1e-8


def default_schedule(lam_from=LAMBDA_PATH_MAX, lam_to=LAMBDA_PATH_MIN, points=LAMBDA_PATH_POINTS):
    """Geometric, strictly descending lambda schedule ending at the path endpoint."""
    if points == 1:
        return np.array([float(lam_to)])
    return np.geomspace(lam_from, lam_to, points)


@dataclass(frozen=True)
class RegularizedProblem:
    m: int
    eta: float
    lam: float
    quad_order: int = None

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        base = ExtensionProblem(self.m, self.eta, self.quad_order)
        object.__setattr__(self, "m", base.m)
        object.__setattr__(self, "eta", base.eta)
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "quad_order", base.quad_order)

    @property
    def extension(self):
        return ExtensionProblem(self.m, self.eta, self.quad_order)

    @property
    def l1_weight(self):
        return 2.0 * self.eta / np.pi


@dataclass(frozen=True)
class _Design:
    matrix: np.ndarray
    target: np.ndarray
    gram: np.ndarray
    rhs: np.ndarray
    lipschitz: float
    l1_weight: float
    target_norm: float
    ls_solution: np.ndarray
    ls_error: float

    @property
    def mu_max(self):
        """Smallest surrogate multiplier with a zero minimiser."""
        return float(np.max(np.abs(self.rhs))) / self.l1_weight

    def gradient(self, a):
        """A^T (y - A a), formed from the residual to avoid Gram cancellation."""
        return self.matrix.T @ (self.target - self.matrix @ a)

    def residual_norm(self, a):
        return float(np.linalg.norm(self.target - self.matrix @ a))


@lru_cache(maxsize=64)
def _design(m, eta, quad_order):
    problem = ExtensionProblem(m, eta, quad_order)
    a_mat, y = weighted_design(problem)
    gram = np.ascontiguousarray(a_mat.T @ a_mat)
    rhs = a_mat.T @ y
    q, r, perm = scipy.linalg.qr(a_mat, mode="economic", pivoting=True)
    ls = np.empty(m)
    ls[perm] = scipy.linalg.solve_triangular(r, q.T @ y)
    for arr in (a_mat, y, gram, rhs, ls):
        arr.flags.writeable = False
    return _Design(
        matrix=a_mat,
        target=y,
        gram=gram,
        rhs=rhs,
        lipschitz=float(np.linalg.eigvalsh(gram)[-1]),
        l1_weight=2.0 * eta / np.pi,
        target_norm=float(np.linalg.norm(y)),
        ls_solution=ls,
        ls_error=float(np.linalg.norm(y - a_mat @ ls)),
    )


def _design_for(problem):
    return _design(problem.m, problem.eta, problem.quad_order)


def objective(coefficients, problem):
    """Regularised loss J(a; lam, eta) with the quadrature L2 residual."""
    a = coefficients.coefficients if isinstance(coefficients, CoefficientSet) else coefficients
    a = np.asarray(a, dtype=float)
    if a.size != problem.m:
        raise ValueError(f"expected {problem.m} coefficients, got {a.size}")
    d = _design_for(problem)
    return d.residual_norm(a) + problem.lam * d.l1_weight * float(np.sum(np.abs(a)))


def _surrogate(d, a, thr):
    r = d.target - d.matrix @ a
    return 0.5 * float(r @ r) + thr * float(np.sum(np.abs(a)))


def _solve_on_support(d, support, signs, thr):
    """Minimiser of the surrogate restricted to ``support`` with fixed signs."""
    a_s = d.matrix[:, support]
    q, r = np.linalg.qr(a_s)
    z = q.T @ d.target - thr * scipy.linalg.solve_triangular(r, signs, trans="T")
    x = scipy.linalg.solve_triangular(r, z)
    # the stationarity residual is tiny next to thr only after refinement
    for _ in range(2):
        e = a_s.T @ (d.target - a_s @ x) - thr * signs
        x = x + scipy.linalg.solve_triangular(r, scipy.linalg.solve_triangular(r, e, trans="T"))
    return x


def _feature_sign(d, thr, a, max_steps):
    """Exact lasso minimiser by active-set feature-sign search.

    Starts from any iterate; each step either adds the most violating
    inactive coordinate or moves along a sign-consistent Newton direction
    with a line search over zero crossings, so the surrogate decreases
    monotonically and the support sequence cannot cycle.
    """
    a = np.array(a, dtype=float)
    signs = np.sign(a)
    tol = 1e-10 * thr + 1e-15
    for step in range(max_steps):
        g = d.gradient(a)
        active = signs != 0
        violation = np.where(active, -np.inf, np.abs(g) - thr)
        consistent = True
        if active.any():
            x_new = _solve_on_support(d, active, signs[active], thr)
            consistent = np.all(np.sign(x_new) == signs[active])
        if consistent:
            if active.any():
                a = np.zeros_like(a)
                a[active] = x_new
                g = d.gradient(a)
                violation = np.where(active, -np.inf, np.abs(g) - thr)
            j = int(np.argmax(violation))
            if violation[j] <= tol:
                return a, step
            signs[j] = np.sign(g[j])
            continue
        cur = a[active]
        delta = x_new - cur
        with np.errstate(divide="ignore", invalid="ignore"):
            t_cross = -cur / delta
        crossing = (np.sign(x_new) != signs[active]) & (t_cross > 0) & (t_cross < 1)
        candidates = np.concatenate([t_cross[crossing], [1.0]])
        best_t, best_f = 1.0, np.inf
        for t in candidates:
            trial = a.copy()
            trial[active] = cur + t * delta
            f = _surrogate(d, trial, thr)
            if f < best_f:
                best_t, best_f = t, f
        moved = cur + best_t * delta
        if best_t < 1.0:
            moved[crossing & (t_cross == best_t)] = 0.0
        idx = np.flatnonzero(active)
        a[idx] = moved
        signs[idx] = np.sign(moved)
    raise NonConvergence(f"feature-sign search hit the {max_steps} step cap", result=a)


def lasso_solution(problem, mu, warm_start=None, fista_iter=FISTA_ITER, max_iter=MAX_ITER):
    """Exact minimiser of the squared surrogate at multiplier ``mu``."""
    d = _design_for(problem)
    if mu >= d.mu_max:
        return np.zeros(problem.m)
    thr = mu * d.l1_weight
    x0 = np.zeros(problem.m) if warm_start is None else np.array(warm_start, dtype=float)
    if fista_iter > 0:
        x0, _, _ = kernels.fista_gram(d.gram, d.rhs, x0, thr, d.lipschitz, int(fista_iter), 1e-13)
    a, _ = _feature_sign(d, thr, x0, max_iter)
    return a


def _as_set(problem, a, lam, mu):
    return CoefficientSet(
        problem.m, problem.eta, a, REGULARIZED, lam=lam, meta={"mu": mu}
    )


def solve_regularized(problem, warm_start=None, fista_iter=FISTA_ITER, max_iter=MAX_ITER):
    """Minimise J for ``problem.lam`` exactly.

    Parameters
    ----------
    problem : RegularizedProblem
    warm_start : array_like or CoefficientSet, optional
        Starting coefficients; also seeds the multiplier bracket.
    fista_iter : int
        Accelerated proximal-gradient iterations before each polish.
    max_iter : int
        Cap on active-set steps per surrogate solve.

    Returns
    -------
    CoefficientSet
        ``provenance == "regularized"``, ``lam == problem.lam`` and the
        surrogate multiplier in ``meta["mu"]``.
    """
    d = _design_for(problem)
    lam = problem.lam
    if isinstance(warm_start, CoefficientSet):
        warm_start = warm_start.coefficients
    if lam == 0.0:
        return _as_set(problem, d.ls_solution, 0.0, 0.0)
    if lam * d.target_norm >= d.mu_max:
        return _as_set(problem, np.zeros(problem.m), lam, d.mu_max)

    state = {"a": None if warm_start is None else np.array(warm_start, dtype=float)}

    def gap(log_mu):
        mu = np.exp(log_mu)
        a = lasso_solution(problem, mu, state["a"], fista_iter, max_iter)
        state["a"] = a
        return log_mu - np.log(lam * d.residual_norm(a))

    lo_bound = np.log(lam * d.ls_error) if d.ls_error > 0 else np.log(lam * d.target_norm) - 80
    hi_bound = np.log(d.mu_max)
    guess_eps = d.target_norm if state["a"] is None else d.residual_norm(state["a"])
    centre = float(np.clip(np.log(lam * guess_eps), lo_bound, hi_bound))
    lo, hi, f_centre = _expand_bracket(gap, centre, lo_bound, hi_bound)
    if f_centre == 0.0:
        log_mu = centre
    else:
        log_mu = brentq(gap, lo, hi, xtol=1e-13, rtol=1e-14)
    mu = float(np.exp(log_mu))
    a = lasso_solution(problem, mu, state["a"], fista_iter, max_iter)
    return _as_set(problem, a, lam, mu)


def _expand_bracket(f, centre, lo_bound, hi_bound, step=0.05):
    """Grow a bracket around ``centre`` for an increasing ``f``."""
    f_c = f(centre)
    if f_c == 0.0:
        return centre, centre, 0.0
    width = step
    if f_c < 0:
        lo = centre
        while True:
            hi = min(centre + width, hi_bound)
            if f(hi) >= 0 or hi == hi_bound:
                return lo, hi, f_c
            lo = hi
            width *= 4
    hi = centre
    while True:
        lo = max(centre - width, lo_bound)
        if f(lo) <= 0 or lo == lo_bound:
            return lo, hi, f_c
        hi = lo
        width *= 4


@dataclass(frozen=True)
class ParetoPoint:
    lam: float
    epsilon: float
    alpha: float
    coefficients: CoefficientSet
    flagged: bool = False

    @classmethod
    def from_coefficients(cls, coeffs, lam=None, flagged=False):
        lam = coeffs.lam if lam is None else lam
        return cls(lam, l2_error(coeffs), alpha_of(coeffs, 1.0), coeffs, flagged)


@dataclass
class ParetoFront:
    m: int
    eta: float
    points: list = field(default_factory=list)

    @property
    def lambdas(self):
        return np.array([p.lam for p in self.points])

    @property
    def epsilons(self):
        return np.array([p.epsilon for p in self.points])

    @property
    def alphas(self):
        return np.array([p.alpha for p in self.points])

    def violations(self, tol=FRONT_TOL):
        """Indices where the front stops being monotone in lambda."""
        eps, alpha = self.epsilons, self.alphas
        bad = []
        for i in range(1, len(self.points)):
            if eps[i] > eps[i - 1] + tol or alpha[i] < alpha[i - 1] - tol:
                bad.append(i)
        return bad

    def dominated(self, tol=FRONT_TOL):
        """Pairs (i, j) where point i is worse than point j in both metrics."""
        eps, alpha = self.epsilons, self.alphas
        out = []
        for i in range(len(self.points)):
            for j in range(len(self.points)):
                if eps[i] > eps[j] + tol and alpha[i] > alpha[j] + tol:
                    out.append((i, j))
        return out


def pareto_sweep(m, eta, lambda_schedule=None, quad_order=None, fista_iter=FISTA_ITER):
    """Warm-started sweep along a strictly descending lambda schedule."""
    schedule = default_schedule() if lambda_schedule is None else np.asarray(lambda_schedule, float)
    schedule = np.atleast_1d(schedule)
    if schedule.size == 0 or np.any(schedule <= 0) or np.any(np.diff(schedule) >= 0):
        raise ValueError("lambda schedule must be positive and strictly descending")
    front = ParetoFront(int(m), float(eta))
    warm = None
    for lam in schedule:
        problem = RegularizedProblem(m, eta, float(lam), quad_order)
        flagged = False
        try:
            coeffs = solve_regularized(problem, warm, fista_iter=fista_iter)
        except NonConvergence as exc:
            coeffs = _as_set(problem, exc.result, float(lam), float("nan"))
            flagged = True
        front.points.append(ParetoPoint.from_coefficients(coeffs, float(lam), flagged))
        warm = coeffs.coefficients
    return front


def path_endpoint(m, eta, quad_order=None):
    """Terminal point of the default warm-started lambda path."""
    return pareto_sweep(m, eta, quad_order=quad_order).points[-1].coefficients


def fit_to_budget(m, eta, epsilon_target, quad_order=None, rtol=1e-3):
    """Coefficients of least l1 norm whose L2 error equals ``epsilon_target``.

    The surrogate multiplier mu is found by Brent's method on log mu; the
    equivalent lambda = mu / eps is stored on the returned set.
    """
    problem = RegularizedProblem(m, eta, 0.0, quad_order)
    d = _design_for(problem)
    target = float(epsilon_target)
    if target < d.ls_error * (1 - 1e-9):
        raise Infeasible(
            f"target {target:.3e} below the {m}-term least-squares error {d.ls_error:.3e}"
        )
    if target >= d.target_norm:
        return _as_set(problem, np.zeros(m), float("inf"), d.mu_max)
    if target <= d.ls_error * (1 + 1e-9):
        return _as_set(problem, d.ls_solution, 0.0, 0.0)

    state = {"a": None}

    def gap(log_mu):
        a = lasso_solution(problem, np.exp(log_mu), state["a"])
        state["a"] = a
        return np.log(d.residual_norm(a)) - np.log(target)

    hi = np.log(d.mu_max)
    lo = hi
    for _ in range(40):
        lo -= 2.0
        if gap(lo) < 0:
            break
    else:
        raise NoBracket(f"no multiplier reaches error {target:.3e} for m={m}")
    log_mu = brentq(gap, lo, hi, xtol=1e-12, rtol=1e-14)
    mu = float(np.exp(log_mu))
    a = lasso_solution(problem, mu, state["a"])
    eps = d.residual_norm(a)
    if abs(eps - target) > rtol * target:
        raise NonConvergence(f"budget fit reached eps={eps:.6e} for target {target:.6e}", result=a)
    return _as_set(problem, a, mu / eps, mu)


@dataclass(frozen=True)
class MonotonicityReport:
    m_values: tuple
    objectives: tuple
    alphas: tuple
    violations: tuple

    @property
    def ok(self):
        return not self.violations


def check_monotonicity(eta, lam, m_values, budget=None, tol=1e-8):
    """Optimal costs J*_m (fixed lam) and alpha*_m (fixed budget) along m.

    Violations of J*_{m'} <= J*_m + tol or alpha*_{m'} <= alpha*_m + tol for
    consecutive entries are reported, not raised.
    """
    m_values = tuple(int(m) for m in m_values)
    if any(b <= a for a, b in zip(m_values, m_values[1:])):
        raise ValueError("m_values must be strictly ascending")
    objectives, alphas = [], []
    for m in m_values:
        problem = RegularizedProblem(m, eta, lam)
        objectives.append(objective(solve_regularized(problem), problem))
        if budget is not None:
            alphas.append(alpha_of(fit_to_budget(m, eta, budget), 1.0))
    violations = []
    for i in range(1, len(m_values)):
        if objectives[i] > objectives[i - 1] + tol:
            violations.append(("objective", m_values[i - 1], m_values[i]))
        if alphas and alphas[i] > alphas[i - 1] + tol:
            violations.append(("alpha", m_values[i - 1], m_values[i]))
    return MonotonicityReport(m_values, tuple(objectives), tuple(alphas), tuple(violations))
