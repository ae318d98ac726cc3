"""Gauss-Legendre quadrature rules."""

import os
from dataclasses import dataclass

import numpy as np

from .errors import EmptyInterval, ZeroOrder

QUAD_ORDER_ENV = "FOURIER_LCU_QUAD_ORDER"


@dataclass(frozen=True)
class QuadratureRule:
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values):
        return float(np.dot(self.weights, values))


def default_quad_order(m):
    """Quadrature order used for an m-term fit.

    ``FOURIER_LCU_QUAD_ORDER`` overrides the 4m + 32 default.
    """
    override = os.environ.get(QUAD_ORDER_ENV)
    if override:
        return int(override)
    return 4 * int(m) + 32


def _legendre_with_derivative(n, x):
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def gauss_legendre(order, max_iter=100, tol=1e-15):
    """Nodes and weights of the ``order``-point rule on [-1, 1].

    Roots of P_order are found by Newton iteration on the three-term
    recurrence, started from Chebyshev-angle guesses.
    """
    order = int(order)
    if order < 1:
        raise ZeroOrder("quadrature order must be >= 1")
    if order == 1:
        return QuadratureRule(1, np.array([0.0]), np.array([2.0]))
    i = np.arange(order)
    x = np.cos(np.pi * (i + 0.75) / (order + 0.5))
    for _ in range(max_iter):
        p, dp = _legendre_with_derivative(order, x)
        step = p / dp
        x = x - step
        if np.max(np.abs(step)) < tol:
            break
    _, dp = _legendre_with_derivative(order, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # guesses run from +1 down to -1
    x, w = x[::-1], w[::-1]
    # exact symmetry of the rule
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(order, x, w)


def map_to_interval(rule, lo, hi):
    if not hi > lo:
        raise EmptyInterval(f"need lo < hi, got [{lo}, {hi}]")
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return QuadratureRule(rule.order, mid + half * rule.nodes, half * rule.weights)
