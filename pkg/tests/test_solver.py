import numpy as np
import pytest

from nullwave import (
    GridSpec,
    InitialData,
    Nonlinearity,
    Profile,
    ProvenanceError,
    linear_axis_variance,
    linear_mixed_variance,
    mixed_second_difference,
    remainder,
    sample_noise,
    solve_linear,
    solve_marching,
    solve_picard,
)

import oracles

ZERO = InitialData(Profile("zero"), Profile("zero"))
SINE = InitialData(Profile("sine", (1.0, 1.0)), Profile("constant", (0.5,)))
TANH = Nonlinearity("tanh")
ONE = Nonlinearity("one")


def region(npts):
    return np.triu_indices(npts)


def test_linear_diagonal_and_first_layer_vanish():
    noise = sample_noise(GridSpec((0.0, 0.0), 12, 0.25), seed=1)
    z = solve_linear(noise)
    idx = np.arange(12)
    assert np.all(z.values[idx, idx] == 0.0)
    assert np.all(z.values[idx, idx + 1] == 0.0)  # no whole cell fits yet


def test_linear_against_direct_triangle_sum():
    grid = GridSpec((0.0, 0.0), 8, 0.25)
    for seed in range(3):
        noise = sample_noise(grid, seed=seed)
        z = solve_linear(noise)
        want = oracles.linear_field(noise.increments)
        iu = region(grid.npts)
        assert np.max(np.abs(z.values[iu] - want[iu])) <= 1e-12


def test_marching_zero_forcing_reproduces_data_term():
    grid = GridSpec((0.0, 0.0), 20, 0.125)
    noise = sample_noise(grid, seed=2)
    v = solve_marching(noise, SINE, Nonlinearity("affine", (0.0, 0.0)))
    a, b = SINE.v0_parts(grid)
    want = (np.zeros_like(v.values) + a[:, None]) + b[None, :]
    iu = region(grid.npts)
    np.testing.assert_array_equal(v.values[iu], want[iu])


def test_marching_unit_forcing_equals_linear_bitwise():
    grid = GridSpec((0.0, 0.0), 48, 0.0625)
    noise = sample_noise(grid, seed=3)
    v = solve_marching(noise, ZERO, ONE)
    z = solve_linear(noise)
    iu = region(grid.npts)
    np.testing.assert_array_equal(v.values[iu], z.values[iu])


def test_marching_against_direct_triangle_sum():
    grid = GridSpec((0.0, 0.0), 16, 0.125)
    a, b = SINE.v0_parts(grid)
    for seed in range(3):
        noise = sample_noise(grid, seed=seed)
        v = solve_marching(noise, SINE, TANH)
        want = oracles.solution_field(noise.increments, a, b, TANH)
        iu = region(grid.npts)
        assert np.max(np.abs(v.values[iu] - want[iu])) <= 1e-12


def test_cell_identity():
    # dd v = -F(v at the adapted corner) * w / 2 on every interior cell
    grid = GridSpec((0.0, 0.0), 64, 1.0 / 64)
    noise = sample_noise(grid, seed=4)
    v = solve_marching(noise, SINE, TANH)
    w = noise.increments
    rng = np.random.default_rng(0)
    for _ in range(300):
        i = int(rng.integers(0, 63))
        j = int(rng.integers(i + 1, 64))
        dd = v.values[i + 1, j + 1] - v.values[i + 1, j] - v.values[i, j + 1] + v.values[i, j]
        rhs = -0.5 * float(TANH(v.values[i, j])) * w[i, j]
        assert abs(dd - rhs) <= 1e-12 * max(1.0, abs(dd), abs(rhs))


def test_block_telescoping_identity():
    # the eps-block mixed difference accumulates forced noise over the block
    grid = GridSpec((0.0, 0.0), 64, 1.0 / 64)
    noise = sample_noise(grid, seed=5)
    v = solve_marching(noise, SINE, TANH)
    w = noise.increments
    base, r = (10, 40), 8
    for sign in (+1, -1):
        st = mixed_second_difference(r * grid.h, grid.h, sign=sign)
        got = v.stencil_value(st, base)
        want = -0.5 * sum(
            float(TANH(v.values[k, l])) * w[k, l]
            for k, l in oracles.mixed_diff_cells(base, r, sign)
        )
        assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


def test_picard_unit_forcing_converges_in_one_sweep():
    grid = GridSpec((0.0, 0.0), 24, 0.125)
    noise = sample_noise(grid, seed=6)
    p = solve_picard(noise, SINE, ONE, iterations=3)
    a, b = SINE.v0_parts(grid)
    want = (a[:, None] + b[None, :]) + solve_linear(noise).values
    iu = region(grid.npts)
    assert np.max(np.abs(p.values[iu] - want[iu])) <= 1e-12
    assert p.history[1] == 0.0 and p.history[2] == 0.0


def test_picard_reaches_marching_fixed_point():
    grid = GridSpec((0.0, 0.0), 32, 1.0 / 32)
    noise = sample_noise(grid, seed=7)
    v = solve_marching(noise, SINE, TANH)
    p = solve_picard(noise, SINE, TANH, iterations=40)
    iu = region(grid.npts)
    # one sweep per diagonal layer makes the iterate exact; 40 > 32
    assert np.max(np.abs(p.values[iu] - v.values[iu])) <= 1e-12
    changes = np.array(p.history)
    assert np.all(changes[32:] <= 1e-15)
    # contraction: the tail of the change sequence decays at least geometrically
    tail = changes[2:20]
    assert np.all(tail[1:] <= 0.75 * tail[:-1] + 1e-300)


def test_remainder_identities():
    grid = GridSpec((0.0, 0.0), 64, 1.0 / 64)
    noise = sample_noise(grid, seed=8)
    base = (8, 40)
    # unit forcing with zero data: the remainder vanishes identically
    v1 = solve_marching(noise, ZERO, ONE)
    z = solve_linear(noise)
    r = remainder(v1, z, ONE, base, 8 * grid.h, +1)
    assert r.remainder == 0.0
    # single cell: both sides are the forced cell increment
    vt = solve_marching(noise, SINE, TANH)
    r1 = remainder(vt, z, TANH, base, grid.h, +1)
    assert abs(r1.remainder) <= 1e-12 * max(1.0, abs(r1.second_diff_solution))
    # reconstruction invariant
    r2 = remainder(vt, z, TANH, base, 16 * grid.h, -1)
    assert r2.remainder == r2.second_diff_solution - r2.scaled_second_diff_linear
    # telescoped form: forced-noise sum with the base value subtracted
    w = noise.increments
    fb = float(TANH(vt.values[base]))
    want = -0.5 * sum(
        (float(TANH(vt.values[k, l])) - fb) * w[k, l]
        for k, l in oracles.mixed_diff_cells(base, 16, -1)
    )
    assert abs(r2.remainder - want) <= 1e-12 * max(1.0, abs(want))


def test_remainder_rejects_mismatched_noise():
    grid = GridSpec((0.0, 0.0), 16, 0.125)
    va = solve_marching(sample_noise(grid, seed=1), ZERO, TANH)
    zb = solve_linear(sample_noise(grid, seed=2))
    with pytest.raises(ProvenanceError):
        remainder(va, zb, TANH, (2, 10), 2 * grid.h, +1)


def test_exact_linear_variances_against_cell_counts():
    grid = GridSpec((0.0, 0.0), 40, 0.05)
    base = (6, 30)
    assert linear_mixed_variance(0.2) == 0.25 * 0.04
    for axis in (1, 2):
        for d in (2, 5, 8):
            cells = oracles.axis_diff_cells(base, d, axis)
            want = 0.25 * len(cells) * grid.h**2
            got = linear_axis_variance(grid, base, axis, d * grid.h)
            assert abs(got - want) <= 1e-15 * max(1.0, want)


def test_exact_linear_variances_against_monte_carlo():
    grid = GridSpec((0.0, 0.0), 24, 0.05)
    base = grid.index_of((0.0, 1.0))
    n_paths = 20_000
    from nullwave import first_difference

    st = first_difference(2, 4 * grid.h, grid.h)
    vals = np.empty(n_paths)
    for k in range(n_paths):
        vals[k] = solve_linear(sample_noise(grid, seed=31, path=k)).stencil_value(st, base)
    sq = vals**2
    want = linear_axis_variance(grid, base, 2, 4 * grid.h)
    se = sq.std(ddof=1) / np.sqrt(n_paths)
    assert abs(sq.mean() - want) <= 4 * se
