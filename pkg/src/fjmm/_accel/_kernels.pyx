# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twins of the kernels in ``pure.py``.

Same contracts, same update order; the Python driver code treats the two
backends interchangeably. See pure.py for the documented semantics.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, isfinite, sqrt

cnp.import_array()

cdef double TINY = 1e-250


def power_chunk(double[:, ::1] M, double[::1] x, double[:, ::1] stats):
    """Shifted power iterations; see pure.power_chunk."""
    cdef Py_ssize_t n = M.shape[0]
    cdef Py_ssize_t m = stats.shape[0]
    cdef Py_ssize_t t, i, j
    cdef double acc, rayleigh, lo, hi, ratio, norm, xmin
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ybuf = np.empty(n, dtype=np.float64)
    cdef double[::1] y = ybuf
    for t in range(m):
        rayleigh = 0.0
        xmin = INFINITY
        for i in range(n):
            acc = x[i]
            for j in range(n):
                acc += M[i, j] * x[j]
            y[i] = acc
            rayleigh += x[i] * acc
            if x[i] < xmin:
                xmin = x[i]
        stats[t, 0] = rayleigh
        if xmin > TINY:
            lo = INFINITY
            hi = -INFINITY
            for i in range(n):
                ratio = y[i] / x[i]
                if ratio < lo:
                    lo = ratio
                if ratio > hi:
                    hi = ratio
            stats[t, 1] = lo
            stats[t, 2] = hi
        else:
            stats[t, 1] = -INFINITY
            stats[t, 2] = INFINITY
        norm = 0.0
        for i in range(n):
            norm += y[i] * y[i]
        norm = sqrt(norm)
        if norm <= 0.0 or not isfinite(norm):
            return t + 1
        for i in range(n):
            x[i] = y[i] / norm
    return m


def simulate_lags(
    double[:, :, ::1] A,
    double[::1] b,
    double[:, ::1] traj,
    Py_ssize_t max_steps,
    double stop_tol,
    Py_ssize_t consec_needed,
):
    """Lagged linear recursion stepping; see pure.simulate_lags."""
    cdef Py_ssize_t L = A.shape[0]
    cdef Py_ssize_t n = A.shape[1]
    cdef Py_ssize_t g = L
    cdef Py_ssize_t step, lag, i, j, row
    cdef Py_ssize_t consec = 0
    cdef double acc, diff, d
    for step in range(max_steps):
        for i in range(n):
            acc = b[i]
            for lag in range(L):
                row = g - 1 - lag
                for j in range(n):
                    acc += A[lag, i, j] * traj[row, j]
            traj[g, i] = acc
        diff = 0.0
        for i in range(n):
            d = traj[g, i] - traj[g - 1, i]
            if d < 0.0:
                d = -d
            if d > diff:
                diff = d
        g += 1
        if stop_tol >= 0.0:
            if diff < stop_tol:
                consec += 1
            else:
                consec = 0
            if consec >= consec_needed:
                return step + 1, True
    return max_steps, False
