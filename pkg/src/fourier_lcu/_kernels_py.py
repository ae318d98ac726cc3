"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``."""

import math

import numpy as np


def fista_gram(gram, rhs, x0, threshold, lipschitz, max_iter, tol):
    """Accelerated proximal gradient on 0.5 a.G.a - r.a + threshold * ||a||_1.

    Uses the gradient-based adaptive restart: momentum is dropped whenever
    the last step points against the proximal gradient direction.
    Returns ``(a, iterations, converged)``.
    """
    gram = np.ascontiguousarray(gram, dtype=float)
    rhs = np.ascontiguousarray(rhs, dtype=float)
    x = np.array(x0, dtype=float)
    y = x.copy()
    t_k = 1.0
    thr = threshold / lipschitz
    it = 0
    for it in range(1, max_iter + 1):
        z = y - (gram @ y - rhs) / lipschitz
        xn = np.sign(z) * np.maximum(np.abs(z) - thr, 0.0)
        d = xn - x
        diff = float(np.max(np.abs(d), initial=0.0))
        if float(np.dot(y - xn, d)) > 0.0:
            t_next, beta = 1.0, 0.0
        else:
            t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t_k * t_k))
            beta = (t_k - 1.0) / t_next
        y = xn + beta * d
        x = xn
        t_k = t_next
        if diff < tol:
            return x, it, True
    return x, it, False
