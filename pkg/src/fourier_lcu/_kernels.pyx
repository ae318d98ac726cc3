# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Behaviour matches ``_kernels_py`` exactly."""

import numpy as np
from libc.math cimport fabs, sqrt


cdef inline double _shrink(double z, double t) nogil:
    if z > t:
        return z - t
    if z < -t:
        return z + t
    return 0.0


def fista_gram(const double[:, ::1] gram, const double[::1] rhs, const double[::1] x0,
               double threshold, double lipschitz, int max_iter, double tol):
    """Accelerated proximal gradient on 0.5 a.G.a - r.a + threshold * ||a||_1.

    Returns ``(a, iterations, converged)``.
    """
    cdef Py_ssize_t n = rhs.shape[0]
    cdef Py_ssize_t i, j
    cdef int it
    cdef double s, z, d, diff, t_k = 1.0, t_next, beta, restart
    cdef double inv_l = 1.0 / lipschitz
    cdef double thr = threshold * inv_l
    x_arr = np.array(x0, dtype=np.float64)
    y_arr = x_arr.copy()
    xn_arr = np.empty(n)
    g_arr = np.empty(n)
    cdef double[::1] x = x_arr
    cdef double[::1] y = y_arr
    cdef double[::1] xn = xn_arr
    cdef double[::1] g = g_arr
    cdef bint converged = False
    with nogil:
        for it in range(1, max_iter + 1):
            for i in range(n):
                s = -rhs[i]
                for j in range(n):
                    s = s + gram[i, j] * y[j]
                g[i] = s
            diff = 0.0
            restart = 0.0
            for i in range(n):
                z = y[i] - g[i] * inv_l
                xn[i] = _shrink(z, thr)
                d = xn[i] - x[i]
                if fabs(d) > diff:
                    diff = fabs(d)
                restart = restart + (y[i] - xn[i]) * d
            if restart > 0.0:
                t_next = 1.0
                beta = 0.0
            else:
                t_next = 0.5 * (1.0 + sqrt(1.0 + 4.0 * t_k * t_k))
                beta = (t_k - 1.0) / t_next
            for i in range(n):
                y[i] = xn[i] + beta * (xn[i] - x[i])
                x[i] = xn[i]
            t_k = t_next
            if diff < tol:
                converged = True
                break
    return x_arr, it, bool(converged)
