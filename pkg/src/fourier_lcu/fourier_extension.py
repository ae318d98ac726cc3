"""Fourier-extension sine series for the identity map on [-pi/eta, pi/eta].

The series ``sum_k a_k sin(k t)`` is 2 pi periodic but only fitted on the
inner interval, leaving a buffer of width ``pi - pi/eta`` in which the
periodic continuation can turn around smoothly. For ``eta > 1`` the sine
dictionary restricted to the inner interval is extremely ill-conditioned
(Gram eigenvalues fall roughly like 10**(-1.6 m)), so the default solve
runs in extended precision on the closed-form Gram matrix.
"""

from dataclasses import dataclass, field

import mpmath
import numpy as np
import scipy.linalg
from scipy.optimize import brentq

from .errors import IllConditioned, NoBracket, NonpositiveScale, SignAmbiguity
from .quadrature import default_quad_order, gauss_legendre, map_to_interval

LEAST_SQUARES = "least_squares"
REGULARIZED = "regularized"
SAWTOOTH = "sawtooth_analytic"
TABLE_FIXTURE = "table_fixture"
FINITE_DIFFERENCE = "finite_difference"
PROVENANCES = (LEAST_SQUARES, REGULARIZED, SAWTOOTH, TABLE_FIXTURE, FINITE_DIFFERENCE)

SIGN_THRESHOLD = 1e-10
ETA_STAR_BRACKET = (1.7, 3.5)


@dataclass(frozen=True)
class ExtensionProblem:
    m: int
    eta: float
    quad_order: int = None

    def __post_init__(self):
        if int(self.m) < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if not self.eta >= 1.0:
            raise ValueError(f"eta must be >= 1, got {self.eta}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "eta", float(self.eta))
        if self.quad_order is None:
            object.__setattr__(self, "quad_order", default_quad_order(self.m))

    @property
    def half_width(self):
        return np.pi / self.eta

    @property
    def buffer(self):
        """Width of the unfitted zone, pi - pi/eta."""
        return np.pi - np.pi / self.eta

    def rule(self):
        c = self.half_width
        return map_to_interval(gauss_legendre(self.quad_order), -c, c)


@dataclass(frozen=True)
class CoefficientSet:
    m: int
    eta: float
    coefficients: np.ndarray
    provenance: str = LEAST_SQUARES
    lam: float = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        a = np.array(self.coefficients, dtype=float).ravel()
        if a.size != self.m:
            raise ValueError(f"expected {self.m} coefficients, got {a.size}")
        if not np.all(np.isfinite(a)):
            raise ValueError("coefficients must be finite")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        a.flags.writeable = False
        object.__setattr__(self, "coefficients", a)

    @property
    def l1(self):
        return float(np.sum(np.abs(self.coefficients)))


@dataclass(frozen=True)
class NormalSystem:
    gram: np.ndarray
    rhs: np.ndarray

    def condition(self):
        return float(np.linalg.cond(self.gram))


def eta_for_m(m):
    """Fitted cost-optimal extension factor, 2 + 0.460 m^-0.319."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return 2.0 + 0.460 * float(m) ** -0.319


def working_digits(m):
    """Decimal digits needed to resolve the smallest Gram eigenvalue."""
    return 30 + 2 * int(m)


def weighted_design(problem):
    """Quadrature design matrix and target, both scaled by sqrt(weights).

    ``||y - A a||_2`` is then the continuous L2 residual on the fitted
    interval.
    """
    rule = problem.rule()
    sw = np.sqrt(rule.weights)
    k = np.arange(1, problem.m + 1)
    design = np.sin(np.outer(rule.nodes, k)) * sw[:, None]
    return design, sw * rule.nodes


def build_normal_system(problem):
    rule = problem.rule()
    k = np.arange(1, problem.m + 1)
    basis = np.sin(np.outer(rule.nodes, k))
    gram = basis.T @ (rule.weights[:, None] * basis)
    rhs = basis.T @ (rule.weights * rule.nodes)
    return NormalSystem(0.5 * (gram + gram.T), rhs)


def closed_form_system(problem):
    """Gram matrix and right-hand side from analytic antiderivatives."""
    m, c = problem.m, problem.half_width
    k = np.arange(1, m + 1, dtype=float)
    j = k[:, None]
    kk = k[None, :]
    diff = j - kk
    with np.errstate(divide="ignore", invalid="ignore"):
        off = np.sin(diff * c) / diff - np.sin((j + kk) * c) / (j + kk)
    gram = np.where(diff == 0, c - np.sin(2 * j * c) / (2 * j), off)
    rhs = 2.0 * (np.sin(k * c) / k**2 - c * np.cos(k * c) / k)
    return NormalSystem(gram, rhs)


def _closed_form_mp(m, eta, derivative=False):
    """Closed-form system (and its eta-derivative) at the current mp precision."""
    mp = mpmath.mp
    eta = mp.mpf(eta)
    c = mp.pi / eta
    dc = -c / eta
    gram = mp.matrix(m, m)
    rhs = mp.matrix(m, 1)
    dgram = mp.matrix(m, m) if derivative else None
    drhs = mp.matrix(m, 1) if derivative else None
    sin_jc = [mp.sin(n * c) for n in range(0, 2 * m + 1)]
    cos_jc = [mp.cos(n * c) for n in range(0, 2 * m + 1)]
    for j in range(1, m + 1):
        rhs[j - 1] = 2 * (sin_jc[j] / j**2 - c * cos_jc[j] / j)
        if derivative:
            drhs[j - 1] = 2 * c * sin_jc[j] * dc
        for k in range(j, m + 1):
            if j == k:
                g = c - sin_jc[2 * j] / (2 * j)
            else:
                g = sin_jc[k - j] / (k - j) - sin_jc[j + k] / (j + k)
            gram[j - 1, k - 1] = gram[k - 1, j - 1] = g
            if derivative:
                dg = (cos_jc[k - j] - cos_jc[j + k]) * dc
                dgram[j - 1, k - 1] = dgram[k - 1, j - 1] = dg
    return gram, rhs, dgram, drhs


def _solve_extended(m, eta, dps=None, derivative=False):
    with mpmath.workdps(dps or working_digits(m)):
        gram, rhs, dgram, drhs = _closed_form_mp(m, eta, derivative)
        try:
            a = mpmath.cholesky_solve(gram, rhs)
        except (ValueError, ZeroDivisionError) as exc:
            raise IllConditioned(f"extended Cholesky failed for m={m}: {exc}") from exc
        da = None
        if derivative:
            da = mpmath.cholesky_solve(gram, drhs - dgram * a)
            da = [da[i] for i in range(m)]
        return [a[i] for i in range(m)], da


def _solve_qr(problem):
    design, target = weighted_design(problem)
    q, r, perm = scipy.linalg.qr(design, mode="economic", pivoting=True)
    y = scipy.linalg.solve_triangular(r, q.T @ target)
    a = np.empty(problem.m)
    a[perm] = y
    return a


def solve_least_squares(problem, method="extended"):
    """Least-squares sine coefficients of f(t) = t on [-pi/eta, pi/eta].

    Parameters
    ----------
    problem : ExtensionProblem
    method : {"extended", "qr", "cholesky"}
        ``"extended"`` Cholesky on the closed-form normal system in
        ``working_digits(m)`` decimal digits (default, deterministic).
        ``"qr"`` column-pivoted QR of the weighted quadrature design
        matrix in double precision. ``"cholesky"`` double-precision
        Cholesky of the quadrature normal system; raises
        :class:`IllConditioned` carrying the QR result when it breaks down.
    """
    m, eta = problem.m, problem.eta
    if method == "extended":
        a, _ = _solve_extended(m, eta)
        a = np.array([float(x) for x in a])
    elif method == "qr":
        a = _solve_qr(problem)
    elif method == "cholesky":
        system = build_normal_system(problem)
        try:
            factor = scipy.linalg.cho_factor(system.gram)
        except np.linalg.LinAlgError as exc:
            fallback = CoefficientSet(m, eta, _solve_qr(problem), LEAST_SQUARES)
            raise IllConditioned(
                f"Cholesky breakdown at m={m}, eta={eta}",
                result=fallback,
                condition=system.condition(),
            ) from exc
        a = scipy.linalg.cho_solve(factor, system.rhs)
    else:
        raise ValueError(f"unknown method {method!r}")
    return CoefficientSet(m, eta, a, LEAST_SQUARES, meta={"method": method})


def sawtooth_coefficients(m):
    """Fourier series of the sawtooth (eta = 1): a_k = (2/k)(-1)^(k-1)."""
    k = np.arange(1, m + 1)
    return CoefficientSet(m, 1.0, 2.0 / k * (-1.0) ** (k - 1), SAWTOOTH)


def _sm_parts(m, eta):
    a, da = _solve_extended(m, eta, derivative=True)
    s = sum(abs(x) for x in a)
    ds = sum(mpmath.sign(x) * d for x, d in zip(a, da))
    smallest = min(abs(x) for x in a)
    return s, ds, smallest


def sm_and_derivative(problem):
    """S_m(eta) = sum |a_k| and its eta-derivative by implicit differentiation.

    The coefficient derivative solves G a' = b' - G' a with the analytic
    eta-derivatives of the closed-form Gram matrix and right-hand side.
    """
    s, ds, smallest = _sm_parts(problem.m, problem.eta)
    if smallest < SIGN_THRESHOLD:
        raise SignAmbiguity(
            f"min |a_k| = {float(smallest):.2e} below {SIGN_THRESHOLD}; sgn(a_k) unreliable"
        )
    return float(s), float(ds)


def eta_star_residual(m, eta):
    s, ds, _ = _sm_parts(m, eta)
    with mpmath.workdps(working_digits(m)):
        eta_mp = mpmath.mpf(eta)
        value = eta_mp * ds / s - (2 - eta_mp) / (eta_mp - 1)
    return float(value)


def eta_star(m, bracket=ETA_STAR_BRACKET, xtol=1e-10):
    """Extension factor minimising eta * S_m(eta) / (pi - pi/eta)."""
    lo, hi = bracket
    f_lo, f_hi = eta_star_residual(m, lo), eta_star_residual(m, hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoBracket(f"no sign change of the eta* residual on [{lo}, {hi}] for m={m}")
    root = brentq(lambda e: eta_star_residual(m, e), lo, hi, xtol=xtol)
    if abs(eta_star_residual(m, root)) >= 1e-6:
        raise NoBracket(f"eta* residual did not vanish for m={m} (sign jump of some a_k)")
    return float(root)


def series_eval(coeffs, points):
    a = coeffs.coefficients if isinstance(coeffs, CoefficientSet) else np.asarray(coeffs)
    points = np.asarray(points, dtype=float)
    k = np.arange(1, a.size + 1)
    return np.sin(np.multiply.outer(points, k)) @ a


def l2_error(coeffs, quad_order=None):
    """Continuous L2 norm of t - sum a_k sin(k t) on [-pi/eta, pi/eta]."""
    problem = ExtensionProblem(coeffs.m, coeffs.eta, quad_order)
    rule = problem.rule()
    r = rule.nodes - series_eval(coeffs, rule.nodes)
    return float(np.sqrt(np.dot(rule.weights, r * r)))


def l2_error_from_system(coeffs):
    """Same norm from ||t||^2 - 2 a.b + a.G.a, evaluated in extended precision."""
    m = coeffs.m
    with mpmath.workdps(working_digits(m)):
        gram, rhs, _, _ = _closed_form_mp(m, coeffs.eta)
        a = mpmath.matrix([mpmath.mpf(float(x)) for x in coeffs.coefficients])
        c = mpmath.pi / mpmath.mpf(coeffs.eta)
        sq = 2 * c**3 / 3 - 2 * (a.T * rhs)[0] + (a.T * gram * a)[0]
        return float(mpmath.sqrt(max(sq, 0)))


def alpha_of(coeffs, scale=1.0):
    """Block-encoding subnormalisation (2 eta / pi) * scale * sum |a_k|."""
    if not scale > 0:
        raise NonpositiveScale(f"scale must be positive, got {scale}")
    return 2.0 * coeffs.eta / np.pi * scale * coeffs.l1
