"""Independent brute-force reference implementations.

Everything here is written as plain loops over cells, with no reuse of
the package's recursions or prefix sums, so the fast paths are checked
against genuinely separate arithmetic.
"""

import numpy as np


def rectangle_sum(w, rect):
    i0, i1, j0, j1 = rect
    total = 0.0
    for i in range(i0, i1):
        for j in range(j0, j1):
            total += w[i, j]
    return total


def strip_sum(w, column, rows, weights):
    lo, hi = rows
    total = 0.0
    for idx, l in enumerate(range(lo, hi)):
        total += weights[idx] * w[column, l]
    return total


def triangle_cells(i, j):
    """Whole cells between the diagonal and lattice point (i, j)."""
    return [(k, l) for k in range(i, j) for l in range(k + 1, j)]


def linear_field(w):
    """O(n^4) evaluation of the unit-forcing zero-data field."""
    n = w.shape[0]
    out = np.zeros((n + 1, n + 1))
    for i in range(n + 1):
        for j in range(i, n + 1):
            out[i, j] = 0.5 * sum(w[k, l] for k, l in triangle_cells(i, j))
    return out


def solution_field(w, a, b, f):
    """O(n^4) evaluation of the nonlinear field.

    Points are filled in order of distance to the diagonal so that every
    cell's corner value is already available; each point's triangle sum
    is evaluated directly.
    """
    n = w.shape[0]
    out = np.full((n + 1, n + 1), np.nan)
    for i in range(n + 1):
        out[i, i] = a[i] + b[i]
    for m in range(1, n + 1):
        for i in range(n + 1 - m):
            j = i + m
            acc = 0.0
            for k, l in triangle_cells(i, j):
                acc += float(f(out[k, l])) * w[k, l]
            out[i, j] = (a[i] + b[j]) + 0.5 * acc
    return out


def stencil_sum(values, taps, base):
    i, j = base
    return sum(c * values[i + di, j + dj] for di, dj, c in taps)


def mixed_diff_cells(base, r, sign):
    """Cells integrated by the mixed second difference (the eps block)."""
    i, j = base
    cols = range(i, i + r) if sign > 0 else range(i - r, i)
    return [(k, l) for k in cols for l in range(j, j + r)]


def axis_diff_cells(base, d, axis):
    """Cells integrated by a single-axis first difference."""
    i, j = base
    if axis == 2:
        return [(k, l) for l in range(j, j + d) for k in range(i, l)]
    return [(k, l) for k in range(i, i + d) for l in range(k + 1, j)]
