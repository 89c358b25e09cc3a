import math

import numpy as np
import pytest

from nullwave import (
    ConfigError,
    GridRangeError,
    GridSpec,
    InitialData,
    Nonlinearity,
    Profile,
    apply_stencil,
    eval_V0,
    first_difference,
    from_null,
    map_original_stencil,
    mixed_second_difference,
    to_null,
)
from nullwave.geometry import SQRT2

import oracles


def test_null_map_examples():
    assert to_null((0.0, 0.0)) == (0.0, 0.0)
    q = to_null((0.0, 1.0))
    assert q == (1.0 / SQRT2, 1.0 / SQRT2)
    t, x = from_null(to_null((0.37, -1.2)))
    assert abs(t - 0.37) <= 1e-14 and abs(x + 1.2) <= 1e-14


def test_null_map_is_isometry():
    rng = np.random.default_rng(4)
    for _ in range(100):
        p, q = rng.normal(size=2), rng.normal(size=2)
        a, b = to_null(p), to_null(q)
        d0 = math.hypot(p[0] - q[0], p[1] - q[1])
        d1 = math.hypot(a[0] - b[0], a[1] - b[1])
        assert abs(d0 - d1) <= 1e-14 * max(1.0, d0)


def test_positive_time_is_upper_region():
    for t, x in [(0.5, -2.0), (0.0, 1.0), (3.0, 0.25)]:
        x1, x2 = to_null((t, x))
        assert (t >= 0) == (x2 >= x1)


def test_eval_v0_examples():
    # zero displacement, unit velocity: V0 = (x2 - x1)/sqrt(2) = t
    data = InitialData(Profile("zero"), Profile("constant", (1.0,)))
    for t, x in [(0.3, 0.1), (1.7, -0.4)]:
        q = to_null((t, x))
        assert abs(eval_V0(data, q) - t) <= 1e-12 * max(1.0, t)
    # constant displacement is preserved
    data = InitialData(Profile("constant", (2.5,)), Profile("zero"))
    assert abs(eval_V0(data, (0.3, 0.9)) - 2.5) <= 1e-14
    # sine displacement at (0, pi/sqrt(2)): (sin 0 + sin pi)/2
    data = InitialData(Profile("sine", (1.0, 1.0)), Profile("zero"))
    assert abs(eval_V0(data, (0.0, math.pi / SQRT2))) <= 1e-12


@pytest.mark.parametrize(
    "profile",
    [
        Profile("zero"),
        Profile("constant", (1.5,)),
        Profile("sine", (0.7, 3.0)),
        Profile("tanh_ramp", (2.0,)),
    ],
)
def test_profile_antiderivative_matches_value(profile):
    # centered finite differences of the closed form recover the profile
    ys = np.linspace(-3.0, 3.0, 41)
    step = 1e-6
    deriv = (profile.antiderivative(ys + step) - profile.antiderivative(ys - step)) / (2 * step)
    np.testing.assert_allclose(deriv, profile(ys), atol=1e-6, rtol=1e-6)


def test_tanh_ramp_antiderivative_stable_at_large_argument():
    p = Profile("tanh_ramp", (1.0,))
    y = 400.0
    # log cosh(y) ~ |y| - log 2 for large |y|
    assert abs(p.antiderivative(y) - (y - math.log(2.0))) <= 1e-12
    assert np.isfinite(p.antiderivative(-750.0))


def test_unknown_presets_rejected():
    with pytest.raises(ConfigError):
        Profile("gaussian")
    with pytest.raises(ConfigError):
        Profile("sine", (1.0,))
    with pytest.raises(ConfigError):
        Nonlinearity("cos")
    with pytest.raises(ConfigError):
        Nonlinearity("affine", (1.0,))


@pytest.mark.parametrize(
    "f",
    [
        Nonlinearity("one"),
        Nonlinearity("identity"),
        Nonlinearity("sin"),
        Nonlinearity("tanh"),
        Nonlinearity("affine", (-0.8, 2.0)),
    ],
)
def test_nonlinearity_lipschitz_bound(f):
    rng = np.random.default_rng(11)
    s = rng.normal(scale=2.0, size=200)
    r = rng.normal(scale=2.0, size=200)
    gap = np.abs(np.asarray(f(s)) - np.asarray(f(r)))
    assert np.all(gap <= f.lipschitz * np.abs(s - r) + 1e-12)


def test_stencil_constructors():
    h = 0.125
    for sign in (+1, -1):
        st = mixed_second_difference(4 * h, h, sign=sign)
        assert st.coefficient_sum() == 0.0
        assert st.taps[0] == (sign * 4, 4, 1.0)
    st1 = first_difference(1, 3 * h, h)
    assert st1.taps == ((3, 0, 1.0), (0, 0, -1.0))
    with pytest.raises(ConfigError):
        mixed_second_difference(0.3 * h, h)
    with pytest.raises(ConfigError):
        first_difference(3, h, h)


def test_first_difference_of_coordinate_field():
    grid = GridSpec((0.0, 0.0), 10, 0.125)
    idx = np.arange(grid.npts)
    field = np.add.outer(grid.origin[0] + idx * grid.h, np.zeros(grid.npts))
    st = first_difference(1, 3 * grid.h, grid.h)
    got = apply_stencil(field, st, (2, 6))
    assert abs(got - 3 * grid.h) <= 1e-12


def test_mixed_difference_annihilates_separable_fields():
    grid = GridSpec((0.0, 0.0), 24, 0.25)
    data = InitialData(Profile("sine", (1.0, 2.0)), Profile("tanh_ramp", (1.0,)))
    a, b = data.v0_parts(grid)
    v0 = a[:, None] + b[None, :]
    scale = np.max(np.abs(v0))
    for sign in (+1, -1):
        st = mixed_second_difference(4 * grid.h, grid.h, sign=sign)
        for base in [(6, 12), (4, 16), (8, 19)]:
            assert abs(apply_stencil(v0, st, base)) <= 1e-14 * max(1.0, scale)


def test_map_original_stencil_patterns():
    h = 0.25
    eps = h / SQRT2
    st1 = map_original_stencil(1, eps, h)
    assert st1.taps == ((1, 1, 1.0), (1, 0, -1.0), (0, 1, -1.0), (0, 0, 1.0))
    st2 = map_original_stencil(2, eps, h)
    assert st2.taps == ((-1, 1, 1.0), (-1, 0, -1.0), (0, 1, -1.0), (0, 0, 1.0))
    assert st1.coefficient_sum() == 0.0 and st2.coefficient_sum() == 0.0
    with pytest.raises(ConfigError):
        map_original_stencil(1, 0.3 * h, h)
    with pytest.raises(ConfigError):
        map_original_stencil(3, eps, h)


def test_mapped_stencil_commutes_with_evaluation():
    # applying the mapped stencil to a tabulated field equals evaluating the
    # four-point space-time combination of the same field read through the
    # coordinate change
    grid = GridSpec((0.0, 0.0), 32, 0.125)
    data = InitialData(Profile("sine", (0.8, 1.5)), Profile("constant", (0.3,)))
    a, b = data.v0_parts(grid)
    v0 = a[:, None] + b[None, :]
    base = (4, 20)
    t0, x0 = from_null(grid.point(*base))
    for kind, r in [(1, 2), (2, 3)]:
        eps_null = r * grid.h
        eps = eps_null / SQRT2
        st = map_original_stencil(kind, eps, grid.h)
        got = apply_stencil(v0, st, base)
        if kind == 1:
            pts = [(t0, x0 + 2 * eps, 1), (t0 - eps, x0 + eps, -1), (t0 + eps, x0 + eps, -1), (t0, x0, 1)]
        else:
            pts = [(t0 + 2 * eps, x0, 1), (t0 + eps, x0 - eps, -1), (t0 + eps, x0 + eps, -1), (t0, x0, 1)]
        want = sum(c * eval_V0(data, to_null((t, x))) for t, x, c in pts)
        assert abs(got - want) <= 1e-12 * max(1.0, np.max(np.abs(v0)))


def test_apply_stencil_rejects_out_of_region():
    grid = GridSpec((0.0, 0.0), 8, 0.5)
    field = np.zeros((grid.npts, grid.npts))
    st = mixed_second_difference(2 * grid.h, grid.h, sign=+1)
    with pytest.raises(GridRangeError):
        apply_stencil(field, st, (2, 3))  # tap (2,0) crosses the diagonal
    with pytest.raises(GridRangeError):
        apply_stencil(field, st, (3, 8))  # tap (0,2) leaves the grid
    got = apply_stencil(field, st, (2, 4))
    assert got == oracles.stencil_sum(field, st.taps, (2, 4))
