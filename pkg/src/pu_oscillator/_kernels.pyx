# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled fixed-step RK4 for autonomous linear systems ``y' = A y``."""
import numpy as np

cimport numpy as cnp
from libc.math cimport isfinite

cnp.import_array()


def rk4_linear(const double[:, ::1] A, const double[::1] y0, double dt, Py_ssize_t nsteps):
    """Return the ``(nsteps + 1, n)`` array of RK4 iterates starting at ``y0``.

    Stops early at the first non-finite iterate; the returned ``bad`` index
    is that step, or -1.
    """
    cdef Py_ssize_t n = y0.shape[0]
    cdef Py_ssize_t step, i, j
    cdef double acc, half = 0.5 * dt, sixth = dt / 6.0
    out_arr = np.zeros((nsteps + 1, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double[::1] y = np.array(y0, dtype=np.float64)
    cdef double[::1] tmp = np.empty(n)
    cdef double[::1] k1 = np.empty(n)
    cdef double[::1] k2 = np.empty(n)
    cdef double[::1] k3 = np.empty(n)
    cdef double[::1] k4 = np.empty(n)
    cdef Py_ssize_t bad = -1

    for i in range(n):
        out[0, i] = y[i]
    for step in range(1, nsteps + 1):
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += A[i, j] * y[j]
            k1[i] = acc
        for i in range(n):
            tmp[i] = y[i] + half * k1[i]
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += A[i, j] * tmp[j]
            k2[i] = acc
        for i in range(n):
            tmp[i] = y[i] + half * k2[i]
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += A[i, j] * tmp[j]
            k3[i] = acc
        for i in range(n):
            tmp[i] = y[i] + dt * k3[i]
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += A[i, j] * tmp[j]
            k4[i] = acc
        for i in range(n):
            y[i] = y[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            out[step, i] = y[i]
            if bad < 0 and not isfinite(y[i]):
                bad = step
        if bad >= 0:
            break
    return out_arr, bad
