"""Coordinate changes, data presets, nonlinearity presets, and stencils.

The light-cone (null) frame is the rotation x1 = (x - t)/sqrt(2),
x2 = (x + t)/sqrt(2); positive times correspond to x2 >= x1.  Initial
data and the forcing nonlinearity are restricted to closed-form preset
families so that the d'Alembert-type term V0 and all Lipschitz constants
are exact.  Stencils carry integer grid offsets with signed coefficients;
the original-coordinate second differences map onto null-frame mixed
differences at scale eps' = sqrt(2) * eps without interpolation.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, GridRangeError
from .noise import GridSpec

SQRT2 = math.sqrt(2.0)


def to_null(p):
    """(t, x) -> (x1, x2)."""
    t, x = p
    return ((x - t) / SQRT2, (x + t) / SQRT2)


def from_null(q):
    """(x1, x2) -> (t, x)."""
    x1, x2 = q
    return ((x2 - x1) / SQRT2, (x1 + x2) / SQRT2)


# ---------------------------------------------------------------------------
# data and nonlinearity presets

_PROFILE_ARITY = {"zero": 0, "constant": 1, "sine": 2, "tanh_ramp": 1}


@dataclass(frozen=True)
class Profile:
    """Scalar profile from a closed-form preset family.

    zero; constant(c); sine(amplitude, frequency); tanh_ramp(scale).
    Every preset is bounded with bounded derivative and has a closed-form
    antiderivative, so initial-data integrals never need quadrature.
    """

    name: str
    params: tuple = ()

    def __post_init__(self):
        if self.name not in _PROFILE_ARITY:
            raise ConfigError(
                f"unknown profile preset {self.name!r}; "
                f"valid presets: {sorted(_PROFILE_ARITY)}"
            )
        params = tuple(float(p) for p in self.params)
        if len(params) != _PROFILE_ARITY[self.name]:
            raise ConfigError(
                f"profile {self.name!r} takes {_PROFILE_ARITY[self.name]} parameter(s), "
                f"got {len(params)}"
            )
        if self.name == "sine" and params[1] == 0:
            raise ConfigError("sine profile needs a nonzero frequency")
        if self.name == "tanh_ramp" and params[0] == 0:
            raise ConfigError("tanh_ramp profile needs a nonzero scale")
        object.__setattr__(self, "params", params)

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        if self.name == "zero":
            return np.zeros_like(y)
        if self.name == "constant":
            return np.full_like(y, self.params[0])
        if self.name == "sine":
            amp, freq = self.params
            return amp * np.sin(freq * y)
        scale = self.params[0]
        return np.tanh(scale * y)

    def antiderivative(self, y):
        y = np.asarray(y, dtype=float)
        if self.name == "zero":
            return np.zeros_like(y)
        if self.name == "constant":
            return self.params[0] * y
        if self.name == "sine":
            amp, freq = self.params
            return -(amp / freq) * np.cos(freq * y)
        scale = self.params[0]
        # log(cosh(z)) / scale, overflow-safe for large |z|
        z = scale * y
        return (np.logaddexp(z, -z) - math.log(2.0)) / scale


@dataclass(frozen=True)
class InitialData:
    """Wave initial data: displacement ``u0`` and velocity ``u1`` presets."""

    u0: Profile
    u1: Profile

    def _half_u0(self, y):
        return 0.5 * self.u0(y)

    def _half_int_u1(self, y):
        return 0.5 * self.u1.antiderivative(y)

    def v0_parts(self, grid: GridSpec):
        """Separable tabulation of V0 on the lattice: V0(i, j) = A[i] + B[j]."""
        idx = np.arange(grid.npts)
        y1 = SQRT2 * (grid.origin[0] + idx * grid.h)
        y2 = SQRT2 * (grid.origin[1] + idx * grid.h)
        a = self._half_u0(y1) - self._half_int_u1(y1)
        b = self._half_u0(y2) + self._half_int_u1(y2)
        return a, b

    def v0(self, q):
        """V0 at a null point, via the same split used for tabulation."""
        y1 = SQRT2 * np.asarray(q[0], dtype=float)
        y2 = SQRT2 * np.asarray(q[1], dtype=float)
        a = self._half_u0(y1) - self._half_int_u1(y1)
        b = self._half_u0(y2) + self._half_int_u1(y2)
        return a + b


ZERO_DATA = InitialData(Profile("zero"), Profile("zero"))


def eval_V0(data: InitialData, q) -> float:
    """Wave-data term: (u0(s*x1) + u0(s*x2))/2 + (1/2) * int u1 over [s*x1, s*x2], s = sqrt(2)."""
    return float(data.v0(q))


_NONLINEARITY_ARITY = {"one": 0, "identity": 0, "sin": 0, "tanh": 0, "affine": 2}

# ids understood by the compiled and numpy kernels
_KERNEL_IDS = {"one": 0, "identity": 1, "sin": 2, "tanh": 3, "affine": 4}


@dataclass(frozen=True)
class Nonlinearity:
    """Lipschitz forcing amplitude F with a declared Lipschitz constant."""

    name: str
    params: tuple = ()

    def __post_init__(self):
        if self.name not in _NONLINEARITY_ARITY:
            raise ConfigError(
                f"unknown nonlinearity preset {self.name!r}; "
                f"valid presets: {sorted(_NONLINEARITY_ARITY)}"
            )
        params = tuple(float(p) for p in self.params)
        if len(params) != _NONLINEARITY_ARITY[self.name]:
            raise ConfigError(
                f"nonlinearity {self.name!r} takes {_NONLINEARITY_ARITY[self.name]} "
                f"parameter(s), got {len(params)}"
            )
        object.__setattr__(self, "params", params)

    @property
    def lipschitz(self) -> float:
        if self.name in ("identity", "sin", "tanh"):
            return 1.0
        if self.name == "affine":
            return abs(self.params[0])
        return 0.0

    @property
    def kernel_id(self) -> int:
        return _KERNEL_IDS[self.name]

    @property
    def kernel_params(self) -> tuple[float, float]:
        if self.name == "affine":
            return self.params
        return (0.0, 0.0)

    def __call__(self, s):
        if self.name == "one":
            return np.ones_like(np.asarray(s, dtype=float))
        if self.name == "identity":
            return np.asarray(s, dtype=float)
        if self.name == "sin":
            return np.sin(s)
        if self.name == "tanh":
            return np.tanh(s)
        a, b = self.params
        return a * np.asarray(s, dtype=float) + b


# ---------------------------------------------------------------------------
# stencils

@dataclass(frozen=True)
class Stencil:
    """Signed finite-difference pattern in grid units.

    ``taps`` is a fixed-order tuple of (di, dj, coefficient); evaluation
    accumulates in tap order, so equal stencils give bitwise-equal sums.
    """

    name: str
    taps: tuple

    def coefficient_sum(self) -> float:
        return float(sum(c for _, _, c in self.taps))


def _grid_multiple(eps: float, h: float, what: str) -> int:
    r = float(eps) / h
    k = int(round(r))
    if k < 1 or abs(r - k) > 1e-9 * max(1.0, abs(r)):
        nearest = max(1, k) * h
        raise ConfigError(
            f"{what} = {eps!r} is not a positive multiple of the lattice step {h!r}; "
            f"nearest valid value is {nearest!r}"
        )
    return k


def mixed_second_difference(eps: float, h: float, sign: int = +1) -> Stencil:
    """Mixed second difference: increment eps (or -eps) on axis 1 and eps on axis 2."""
    r = _grid_multiple(eps, h, "epsilon")
    if sign not in (+1, -1):
        raise ConfigError(f"sign must be +1 or -1, got {sign!r}")
    s = sign * r
    label = "+" if sign > 0 else "-"
    return Stencil(
        name=f"dd[{label}{r}h,{r}h]",
        taps=((s, r, 1.0), (s, 0, -1.0), (0, r, -1.0), (0, 0, 1.0)),
    )


def first_difference(axis: int, eps: float, h: float) -> Stencil:
    """Single-axis first difference with increment eps."""
    r = _grid_multiple(eps, h, "delta")
    if axis == 1:
        taps = ((r, 0, 1.0), (0, 0, -1.0))
    elif axis == 2:
        taps = ((0, r, 1.0), (0, 0, -1.0))
    else:
        raise ConfigError(f"axis must be 1 or 2, got {axis!r}")
    return Stencil(name=f"d{axis}[{r}h]", taps=taps)


def map_original_stencil(kind: int, eps: float, h: float) -> Stencil:
    """Null-frame stencil of the original-coordinate second difference.

    ``kind`` 1 uses the four points (t, x), (t, x+2e), (t-e, x+e), (t+e, x+e);
    ``kind`` 2 uses (t, x), (t+2e, x), (t+e, x-e), (t+e, x+e).  Under the
    null rotation both collapse to mixed second differences at scale
    eps' = sqrt(2) * eps, with the axis-1 increment negated for kind 2.
    ``sqrt(2) * eps`` must be a lattice multiple.
    """
    if kind not in (1, 2):
        raise ConfigError(f"original-coordinate stencil kind must be 1 or 2, got {kind!r}")
    eps_null = SQRT2 * float(eps)
    base = mixed_second_difference(eps_null, h, sign=+1 if kind == 1 else -1)
    return Stencil(name=f"D{kind}[{eps!r}]", taps=base.taps)


def apply_stencil(values: np.ndarray, stencil: Stencil, base) -> float:
    """Evaluate a stencil on a lattice field stored as an (n+1, n+1) array.

    Only the region j >= i is defined; any tap landing outside raises.
    """
    i, j = int(base[0]), int(base[1])
    npts = values.shape[0]
    acc = 0.0
    for di, dj, c in stencil.taps:
        ii, jj = i + di, j + dj
        if not (0 <= ii <= jj < npts):
            raise GridRangeError(
                f"stencil {stencil.name} tap ({di},{dj}) at base ({i},{j}) leaves the "
                f"computed region (0 <= i <= j <= {npts - 1})"
            )
        acc += c * values[ii, jj]
    return float(acc)
