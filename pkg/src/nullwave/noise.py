"""Lattice realization of two-parameter (space-time) white noise.

The noise is represented by i.i.d. centered Gaussian increments, one per
grid cell, with variance equal to the cell area h^2.  Every integral the
rest of the package needs reduces to a (weighted) sum of cell increments,
so the Wiener isometry E[xi(A) xi(B)] = area(A & B) holds exactly on the
grid sigma-algebra: for disjoint cells the increments are independent,
and a grid-aligned rectangle of k cells has variance k * h^2.

Seeding is counter-based: path ``k`` of master seed ``s`` draws from a
Philox stream keyed by ``(s, k)`` and fills the increment array in a fixed
row-major order.  A field is therefore a pure function of
``(grid, seed, path)`` — independent of thread count, scheduling, or which
other paths are sampled.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, GridRangeError

RESOURCE_CAP_N = 4096


@dataclass(frozen=True)
class GridSpec:
    """Uniform lattice on the null plane.

    ``origin`` is the lower-left corner (a1, a2); the grid covers the
    square [a1, a1 + n*h] x [a2, a2 + n*h] with n cells of side h per
    axis, i.e. n + 1 lattice points per axis.
    """

    origin: tuple[float, float]
    n: int
    h: float

    def __post_init__(self):
        errors = []
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 2):
            errors.append(f"grid.n must be an integer >= 2, got {self.n!r}")
        if not (np.isfinite(self.h) and self.h > 0):
            errors.append(f"grid.h must be a positive real, got {self.h!r}")
        if len(self.origin) != 2 or not all(np.isfinite(v) for v in self.origin):
            errors.append(f"grid.origin must be a finite pair, got {self.origin!r}")
        if errors:
            raise ConfigError(errors)
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "h", float(self.h))

    @property
    def npts(self) -> int:
        return self.n + 1

    def x1(self, i):
        """First null coordinate of lattice column ``i``."""
        return self.origin[0] + np.asarray(i) * self.h

    def x2(self, j):
        """Second null coordinate of lattice row ``j``."""
        return self.origin[1] + np.asarray(j) * self.h

    def point(self, i: int, j: int) -> tuple[float, float]:
        return (float(self.x1(i)), float(self.x2(j)))

    def cells_of(self, length: float, what: str = "length") -> int:
        """Convert a physical length into a whole number of cells.

        Raises ConfigError when ``length`` is not a (positive) integer
        multiple of h, naming the nearest valid value.
        """
        r = float(length) / self.h
        k = int(round(r))
        if k < 1 or abs(r - k) > 1e-9 * max(1.0, abs(r)):
            nearest = max(1, k) * self.h
            raise ConfigError(
                f"{what} = {length!r} is not a positive multiple of grid.h = {self.h!r}; "
                f"nearest valid value is {nearest!r}"
            )
        return k

    def index_of(self, point, what: str = "point") -> tuple[int, int]:
        """Lattice index of a grid-aligned point, validated."""
        idx = []
        for axis, (coord, a) in enumerate(zip(point, self.origin)):
            r = (float(coord) - a) / self.h
            k = int(round(r))
            if abs(r - k) > 1e-9 * max(1.0, abs(r)):
                nearest = a + k * self.h
                raise ConfigError(
                    f"{what} coordinate {axis + 1} = {coord!r} is not on the lattice "
                    f"(origin {a!r}, step {self.h!r}); nearest lattice value is {nearest!r}"
                )
            if not 0 <= k <= self.n:
                raise ConfigError(
                    f"{what} coordinate {axis + 1} = {coord!r} lies outside the grid "
                    f"(valid index range 0..{self.n})"
                )
            idx.append(k)
        return (idx[0], idx[1])


class CellRect(NamedTuple):
    """Half-open rectangle of cells: [i_lo, i_hi) x [j_lo, j_hi)."""

    i_lo: int
    i_hi: int
    j_lo: int
    j_hi: int


@dataclass(frozen=True)
class NoiseField:
    """One realization of the lattice noise on ``grid``.

    ``increments[i, j]`` is the integral of the noise over cell (i, j),
    distributed N(0, h^2), mutually independent across cells.
    """

    grid: GridSpec
    seed: int
    path: int
    increments: np.ndarray

    @cached_property
    def cumulative(self) -> np.ndarray:
        """(n+1) x (n+1) prefix-sum table; entry [i, j] sums cells below (i, j)."""
        n = self.grid.n
        c = np.zeros((n + 1, n + 1))
        c[1:, 1:] = self.increments.cumsum(axis=0).cumsum(axis=1)
        return c

    def same_realization(self, other: "NoiseField") -> bool:
        return (
            self.grid == other.grid
            and self.seed == other.seed
            and self.path == other.path
        )


def _stream(seed: int, path: int) -> np.random.Generator:
    key = np.array([np.uint64(seed), np.uint64(path)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_noise(grid: GridSpec, seed: int, path: int = 0) -> NoiseField:
    """Draw the noise increments for one path.

    Deterministic in (grid, seed, path); increments are N(0, h^2) i.i.d.
    """
    if grid.n > RESOURCE_CAP_N:
        raise ConfigError(
            f"grid.n = {grid.n} exceeds the resource cap {RESOURCE_CAP_N}; "
            "refusing to allocate"
        )
    gen = _stream(seed, path)
    increments = gen.standard_normal((grid.n, grid.n)) * grid.h
    increments.setflags(write=False)
    return NoiseField(grid=grid, seed=int(seed), path=int(path), increments=increments)


def _check_rect(noise: NoiseField, rect) -> CellRect:
    r = CellRect(*rect)
    n = noise.grid.n
    if not (0 <= r.i_lo <= r.i_hi <= n and 0 <= r.j_lo <= r.j_hi <= n):
        raise GridRangeError(f"rectangle {tuple(r)} outside cell range 0..{n}")
    return r


def rectangle_integral(noise: NoiseField, rect) -> float:
    """Integral of the noise over a half-open cell rectangle.

    Computed by four-corner inclusion-exclusion on the prefix-sum table,
    so disjoint decompositions re-add to the same value up to rounding.
    """
    r = _check_rect(noise, rect)
    c = noise.cumulative
    return float(
        ((c[r.i_hi, r.j_hi] - c[r.i_lo, r.j_hi]) - c[r.i_hi, r.j_lo]) + c[r.i_lo, r.j_lo]
    )


def strip_integral(noise: NoiseField, column: int, rows, weights) -> float:
    """Weighted sum of increments in one cell column.

    ``rows`` is a half-open (lo, hi) range of cell rows; ``weights`` has
    one entry per row in the range.
    """
    lo, hi = int(rows[0]), int(rows[1])
    n = noise.grid.n
    if not (0 <= column < n and 0 <= lo <= hi <= n):
        raise GridRangeError(f"strip column={column} rows=({lo},{hi}) outside cell range 0..{n}")
    w = np.asarray(weights, dtype=float)
    if w.shape != (hi - lo,):
        raise ConfigError(f"weights must have length {hi - lo}, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ConfigError("weights must be finite")
    return float(np.dot(w, noise.increments[column, lo:hi]))


def nested_corner_integrals(h: float, sides: "np.ndarray", seed: int, path: int = 0) -> np.ndarray:
    """Noise integrals over nested grid-aligned squares sharing one corner.

    ``sides`` lists the square side lengths in cells, strictly decreasing.
    Rather than materializing the covering lattice (the outermost square
    may span >10^4 cells per axis), the L-shaped shells between
    consecutive squares are aggregated: a shell of c cells integrates to a
    single N(0, c * h^2) draw, independent across shells, which is the
    exact law of the cell-by-cell construction.  Draws are consumed from
    the (seed, path) stream innermost-first.
    """
    k = np.asarray(sides, dtype=np.int64)
    if k.ndim != 1 or k.size == 0 or np.any(k < 1) or np.any(np.diff(k) >= 0):
        raise ConfigError(f"sides must be strictly decreasing positive cell counts, got {sides!r}")
    areas = (k.astype(float) * h) ** 2
    shell_var = np.empty(k.size)
    shell_var[-1] = areas[-1]
    shell_var[:-1] = areas[:-1] - areas[1:]
    gen = _stream(seed, path)
    draws = gen.standard_normal(k.size) * np.sqrt(shell_var[::-1])
    return np.cumsum(draws)[::-1].copy()
