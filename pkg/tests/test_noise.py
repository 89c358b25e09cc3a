import numpy as np
import pytest

from nullwave import (
    ConfigError,
    GridRangeError,
    GridSpec,
    nested_corner_integrals,
    rectangle_integral,
    sample_noise,
    strip_integral,
)

import oracles


def test_grid_validation():
    with pytest.raises(ConfigError):
        GridSpec((0.0, 0.0), 1, 0.5)
    with pytest.raises(ConfigError):
        GridSpec((0.0, 0.0), 4, 0.0)
    with pytest.raises(ConfigError) as exc:
        GridSpec((0.0, float("inf")), 1, -1.0)
    assert len(exc.value.errors) == 3  # every problem reported


def test_unit_cell_increments_standard_normal():
    # h = 1: each cell integral has variance equal to the unit cell area
    noise = sample_noise(GridSpec((0.0, 0.0), 100, 1.0), seed=7)
    w = noise.increments.ravel()
    se_var = np.sqrt(2.0 / (w.size - 1))
    assert abs(w.var(ddof=1) - 1.0) <= 4 * se_var
    assert abs(w.mean()) <= 4 / np.sqrt(w.size)


def test_seed_determinism_and_distinct_paths():
    grid = GridSpec((-1.0, 2.0), 16, 0.125)
    a = sample_noise(grid, seed=42, path=9)
    b = sample_noise(grid, seed=42, path=9)
    np.testing.assert_array_equal(a.increments, b.increments)
    c = sample_noise(grid, seed=42, path=10)
    d = sample_noise(grid, seed=43, path=9)
    assert not np.array_equal(a.increments, c.increments)
    assert not np.array_equal(a.increments, d.increments)


def test_wiener_isometry_monte_carlo():
    # E[I(A) I(B)] = area(A & B) for grid-aligned rectangles, over 1e5 paths
    grid = GridSpec((0.0, 0.0), 12, 0.05)
    rect_a = (0, 6, 0, 4)  # 0.3 x 0.2, area 0.06
    rect_b = (2, 8, 2, 6)  # overlap 4 x 2 cells = 0.02
    n_paths = 100_000
    vals = np.empty((n_paths, 2))
    for k in range(n_paths):
        noise = sample_noise(grid, seed=2024, path=k)
        vals[k, 0] = rectangle_integral(noise, rect_a)
        vals[k, 1] = rectangle_integral(noise, rect_b)
    var_a = vals[:, 0].var(ddof=1)
    se = 0.06 * np.sqrt(2.0 / (n_paths - 1))
    assert abs(var_a - 0.06) <= 3 * se
    cov = np.cov(vals[:, 0], vals[:, 1], ddof=1)[0, 1]
    # SE of the sample covariance of a bivariate Gaussian
    se_cov = np.sqrt((0.06 * vals[:, 1].var(ddof=1) + cov**2) / (n_paths - 1))
    assert abs(cov - 0.02) <= 4 * se_cov


def test_rectangle_against_direct_sum_and_additivity():
    grid = GridSpec((0.0, 0.0), 10, 0.3)
    noise = sample_noise(grid, seed=5)
    w = noise.increments
    rng = np.random.default_rng(0)
    for _ in range(50):
        i0, i1 = sorted(rng.integers(0, 11, 2))
        j0, j1 = sorted(rng.integers(0, 11, 2))
        got = rectangle_integral(noise, (i0, i1, j0, j1))
        want = oracles.rectangle_sum(w, (i0, i1, j0, j1))
        assert abs(got - want) <= 1e-12 * max(1.0, abs(want))
    # whole grid is the last prefix-sum entry, exactly
    assert rectangle_integral(noise, (0, 10, 0, 10)) == noise.cumulative[10, 10]
    # empty rectangle
    assert rectangle_integral(noise, (4, 4, 2, 9)) == 0.0
    # disjoint split re-adds to the whole
    whole = rectangle_integral(noise, (1, 9, 2, 10))
    parts = rectangle_integral(noise, (1, 5, 2, 10)) + rectangle_integral(noise, (5, 9, 2, 10))
    assert abs(whole - parts) <= 1e-12 * max(1.0, abs(whole))


def test_rectangle_out_of_range():
    noise = sample_noise(GridSpec((0.0, 0.0), 4, 1.0), seed=1)
    with pytest.raises(GridRangeError):
        rectangle_integral(noise, (0, 5, 0, 2))
    with pytest.raises(GridRangeError):
        rectangle_integral(noise, (-1, 2, 0, 2))


def test_strip_integral():
    grid = GridSpec((0.0, 0.0), 8, 0.5)
    noise = sample_noise(grid, seed=3)
    w = noise.increments
    assert strip_integral(noise, 2, (1, 6), np.zeros(5)) == 0.0
    ones = strip_integral(noise, 3, (2, 7), np.ones(5))
    assert abs(ones - rectangle_integral(noise, (3, 4, 2, 7))) <= 1e-12
    rng = np.random.default_rng(8)
    weights = rng.normal(size=6)
    got = strip_integral(noise, 5, (1, 7), weights)
    want = oracles.strip_sum(w, 5, (1, 7), weights)
    assert abs(got - want) <= 1e-12 * max(1.0, abs(want))
    with pytest.raises(GridRangeError):
        strip_integral(noise, 8, (0, 2), np.ones(2))
    with pytest.raises(ConfigError):
        strip_integral(noise, 1, (0, 2), np.ones(3))
    with pytest.raises(ConfigError):
        strip_integral(noise, 1, (0, 2), [np.inf, 0.0])


def test_nested_corner_integrals_law():
    h = 0.25
    sides = [8, 4, 1]
    n_paths = 40_000
    vals = np.empty((n_paths, 3))
    for k in range(n_paths):
        vals[k] = nested_corner_integrals(h, sides, seed=99, path=k)
    areas = [(s * h) ** 2 for s in sides]
    for col, area in enumerate(areas):
        se = area * np.sqrt(2.0 / (n_paths - 1))
        assert abs(vals[:, col].var(ddof=1) - area) <= 4 * se
    # nesting: cov(outer, inner) = var(inner)
    cov = np.cov(vals[:, 0], vals[:, 2], ddof=1)[0, 1]
    se_cov = np.sqrt((areas[0] * areas[2] + cov**2) / (n_paths - 1))
    assert abs(cov - areas[2]) <= 4 * se_cov
    # determinism
    np.testing.assert_array_equal(
        nested_corner_integrals(h, sides, seed=99, path=17),
        nested_corner_integrals(h, sides, seed=99, path=17),
    )


def test_nested_corner_integrals_validation():
    with pytest.raises(ConfigError):
        nested_corner_integrals(0.1, [4, 4], seed=0)
    with pytest.raises(ConfigError):
        nested_corner_integrals(0.1, [2, 3], seed=0)
    with pytest.raises(ConfigError):
        nested_corner_integrals(0.1, [2, 0], seed=0)
