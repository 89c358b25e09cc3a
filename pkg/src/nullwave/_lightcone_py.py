"""Pure-numpy light-cone marching kernels (fallback backend).

Each kernel fills the stochastic part g of a field on the lattice points
(i, j), j >= i, of an (n+1)x(n+1) array.  g vanishes on the diagonal and
satisfies

    g(i, j) = g(i+1, j) + S(i, j) / 2,
    S(i, j) = S(i, j-1) + F(value(i, j-1)) * w[i, j-1],   S(i, i+1) = 0,

which accumulates the forced noise over all whole cells of the triangle
between the diagonal and the point.  Cells straddling the diagonal are
excluded.  The marching kernel evaluates F on the field being built (the
adapted corner of each cell); the sweep kernel evaluates F on a frozen
previous iterate.

Vectorization runs along anti-diagonals j - i = m, reading and writing
strided diagonal views; per lattice point the arithmetic (and its
floating-point order) is identical to the scalar recursion, so results
agree with the compiled backend except for sub-ulp differences in the
transcendental presets.
"""

import numpy as np

name = "python"


def _out_array(npts):
    g = np.empty((npts, npts))
    g.ravel()[:: npts + 1] = 0.0  # diagonal; entries below it stay undefined
    return g


def linear(w) -> np.ndarray:
    n = w.shape[0]
    npts = n + 1
    g = _out_array(npts)
    gf = g.ravel()
    wf = w.ravel()
    s = np.zeros(n)
    for m in range(1, npts):
        k = npts - m
        gprev = gf[m - 1 :: npts + 1]
        if m >= 2:
            s[:k] += wf[m - 1 :: n + 1][:k]
        gf[m :: npts + 1][:k] = gprev[1 : k + 1] + 0.5 * s[:k]
    return g


def march(w, a, b, fid, c0, c1, fcall) -> np.ndarray:
    n = w.shape[0]
    npts = n + 1
    g = _out_array(npts)
    gf = g.ravel()
    wf = w.ravel()
    s = np.zeros(n)
    for m in range(1, npts):
        k = npts - m
        gprev = gf[m - 1 :: npts + 1]
        if m >= 2:
            vprev = (gprev[:k] + a[:k]) + b[m - 1 : m - 1 + k]
            s[:k] += fcall(vprev) * wf[m - 1 :: n + 1][:k]
        gf[m :: npts + 1][:k] = gprev[1 : k + 1] + 0.5 * s[:k]
    return g


def sweep(w, vprev, fid, c0, c1, fcall) -> np.ndarray:
    n = w.shape[0]
    npts = n + 1
    g = _out_array(npts)
    for i in range(n - 1, -1, -1):
        forced = fcall(vprev[i, i + 1 : n]) * w[i, i + 1 : n]
        g[i, i + 1] = g[i + 1, i + 1]
        g[i, i + 2 : npts] = g[i + 1, i + 2 : npts] + 0.5 * np.cumsum(forced)
    return g
