# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled light-cone marching kernels (hot inner loops).

Same recursions as the numpy fallback, written as scalar row sweeps:
marching row i needs only row i+1 and a single running accumulator, so
the walk is cache-friendly and releases the GIL.
"""

import numpy as np

from libc.math cimport sin, tanh

name = "cython"


cdef inline double feval(int fid, double c0, double c1, double s) noexcept nogil:
    if fid == 0:
        return 1.0
    elif fid == 1:
        return s
    elif fid == 2:
        return sin(s)
    elif fid == 3:
        return tanh(s)
    return c0 * s + c1


cdef void _diag_zero(double[:, ::1] g) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(g.shape[0]):
        g[i, i] = 0.0


def linear(w):
    cdef const double[:, ::1] wv = w
    cdef Py_ssize_t n = wv.shape[0]
    out = np.empty((n + 1, n + 1))
    cdef double[:, ::1] g = out
    cdef Py_ssize_t i, j
    cdef double s
    with nogil:
        _diag_zero(g)
        for i in range(n - 1, -1, -1):
            g[i, i + 1] = g[i + 1, i + 1]
            s = 0.0
            for j in range(i + 2, n + 1):
                s += wv[i, j - 1]
                g[i, j] = g[i + 1, j] + 0.5 * s
    return out


def march(w, a, b, int fid, double c0, double c1, fcall=None):
    cdef const double[:, ::1] wv = w
    cdef const double[::1] av = a
    cdef const double[::1] bv = b
    cdef Py_ssize_t n = wv.shape[0]
    out = np.empty((n + 1, n + 1))
    cdef double[:, ::1] g = out
    cdef Py_ssize_t i, j
    cdef double s
    with nogil:
        _diag_zero(g)
        for i in range(n - 1, -1, -1):
            g[i, i + 1] = g[i + 1, i + 1]
            s = 0.0
            for j in range(i + 2, n + 1):
                s += feval(fid, c0, c1, (g[i, j - 1] + av[i]) + bv[j - 1]) * wv[i, j - 1]
                g[i, j] = g[i + 1, j] + 0.5 * s
    return out


def sweep(w, vprev, int fid, double c0, double c1, fcall=None):
    cdef const double[:, ::1] wv = w
    cdef const double[:, ::1] vp = vprev
    cdef Py_ssize_t n = wv.shape[0]
    out = np.empty((n + 1, n + 1))
    cdef double[:, ::1] g = out
    cdef Py_ssize_t i, j
    cdef double s
    with nogil:
        _diag_zero(g)
        for i in range(n - 1, -1, -1):
            g[i, i + 1] = g[i + 1, i + 1]
            s = 0.0
            for j in range(i + 2, n + 1):
                s += feval(fid, c0, c1, vp[i, j - 1]) * wv[i, j - 1]
                g[i, j] = g[i + 1, j] + 0.5 * s
    return out
