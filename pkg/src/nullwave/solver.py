"""Field solvers on the null-plane lattice.

Three routes to the same object:

* ``solve_linear`` — the zero-data unit-forcing field, accumulated
  directly from the noise by the strip recursion.
* ``solve_marching`` — the nonlinear field, marched outward from the
  diagonal; each cell's forcing F is evaluated at the cell corner whose
  value depends only on noise strictly below the cell (the adapted
  corner), so the scheme realizes the martingale-measure integral.
* ``solve_picard`` — fixed-point iteration of the integral map with a
  frozen integrand field per sweep; converges to the marching solution
  (exactly once the iteration count reaches the lattice depth).

Every interior cell of a solved field satisfies the discrete cell
identity  dd v = -F(v at the cell's adapted corner) * w / 2, where dd is
the one-cell mixed second difference; the mixed difference over an
r x r block telescopes to the forced noise sum over the block.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import backend
from .errors import GridRangeError, ProvenanceError
from .geometry import InitialData, Nonlinearity, Stencil, apply_stencil, mixed_second_difference
from .noise import GridSpec, NoiseField


@dataclass(frozen=True)
class SolutionField:
    """Field values on the lattice points (i, j), j >= i.

    ``values`` is a full (n+1, n+1) array whose strict lower triangle is
    undefined (never read); use ``value``/``stencil_value`` for guarded
    access.  ``history`` records per-sweep sup-norm changes for Picard
    fields.
    """

    grid: GridSpec
    values: np.ndarray
    kind: str  # linear | marching | picard
    noise: NoiseField
    history: Optional[tuple] = None

    def value(self, base) -> float:
        i, j = int(base[0]), int(base[1])
        if not (0 <= i <= j <= self.grid.n):
            raise GridRangeError(
                f"lattice point ({i},{j}) outside the region 0 <= i <= j <= {self.grid.n}"
            )
        return float(self.values[i, j])

    def stencil_value(self, stencil: Stencil, base) -> float:
        return apply_stencil(self.values, stencil, base)


def _assemble(g, a, b):
    return (g + a[:, None]) + b[None, :]


def solve_linear(noise: NoiseField, kernels=None) -> SolutionField:
    """Zero-data field with unit forcing, directly from the noise."""
    kern = kernels or backend.get_kernels()
    g = kern.linear(noise.increments)
    g.setflags(write=False)
    return SolutionField(grid=noise.grid, values=g, kind="linear", noise=noise)


def solve_marching(
    noise: NoiseField, data: InitialData, f: Nonlinearity, kernels=None
) -> SolutionField:
    """Nonlinear field by the explicit light-cone marching scheme."""
    kern = kernels or backend.get_kernels()
    a, b = data.v0_parts(noise.grid)
    c0, c1 = f.kernel_params
    g = kern.march(noise.increments, a, b, f.kernel_id, c0, c1, f)
    v = _assemble(g, a, b)
    v.setflags(write=False)
    return SolutionField(grid=noise.grid, values=v, kind="marching", noise=noise)


def solve_picard(
    noise: NoiseField,
    data: InitialData,
    f: Nonlinearity,
    iterations: int = 30,
    kernels=None,
) -> SolutionField:
    """Fixed-point iteration of the integral map, fixed sweep count.

    The first iterate integrates F of the data term V0; each sweep
    re-integrates F of the previous iterate.  The recorded history holds
    one sup-norm change per sweep (a deterministic runtime by design,
    with the contraction visible in the decay of the changes).
    """
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    kern = kernels or backend.get_kernels()
    grid = noise.grid
    a, b = data.v0_parts(grid)
    c0, c1 = f.kernel_params
    region = np.triu_indices(grid.npts)
    v = _assemble(np.zeros((grid.npts, grid.npts)), a, b)
    changes = []
    for _ in range(iterations):
        g = kern.sweep(noise.increments, v, f.kernel_id, c0, c1, f)
        v_next = _assemble(g, a, b)
        changes.append(float(np.max(np.abs(v_next[region] - v[region]))))
        v = v_next
    v.setflags(write=False)
    return SolutionField(
        grid=grid, values=v, kind="picard", noise=noise, history=tuple(changes)
    )


@dataclass(frozen=True)
class RemainderSample:
    """Mixed-difference linearization remainder at one base point and scale."""

    base: tuple
    eps: float
    sign: int
    remainder: float
    second_diff_solution: float
    scaled_second_diff_linear: float


def remainder(
    vfield: SolutionField,
    zfield: SolutionField,
    f: Nonlinearity,
    base,
    eps: float,
    sign: int = +1,
) -> RemainderSample:
    """Mixed second difference of the solution minus its local linear model.

    Both fields must come from the same noise realization.
    """
    if not vfield.noise.same_realization(zfield.noise):
        raise ProvenanceError(
            "remainder needs fields driven by the same noise realization "
            f"(got seeds {vfield.noise.seed}/{zfield.noise.seed}, "
            f"paths {vfield.noise.path}/{zfield.noise.path})"
        )
    stencil = mixed_second_difference(eps, vfield.grid.h, sign=sign)
    dd_v = vfield.stencil_value(stencil, base)
    dd_z = zfield.stencil_value(stencil, base)
    scaled = float(f(vfield.value(base))) * dd_z
    return RemainderSample(
        base=(int(base[0]), int(base[1])),
        eps=float(eps),
        sign=int(sign),
        remainder=dd_v - scaled,
        second_diff_solution=dd_v,
        scaled_second_diff_linear=scaled,
    )


# ---------------------------------------------------------------------------
# closed-form lattice moments of the linear field (cell counts x h^2)

def linear_mixed_variance(eps: float) -> float:
    """Exact variance of the mixed second difference of the linear field.

    The mixed difference over an aligned eps x eps block integrates the
    noise over that block (times -1/2), so the variance is eps^2 / 4 for
    either sign, at any lattice step dividing eps.
    """
    return 0.25 * float(eps) ** 2


def linear_axis_variance(grid: GridSpec, base, axis: int, delta: float) -> float:
    """Exact variance of a single-axis first difference of the linear field.

    Counting whole cells between the two integration triangles: for an
    axis-2 increment of d cells at base (i, j) the difference integrates
    rows j..j+d-1 with l - i cells in row l; for axis 1 it integrates
    columns i..i+d-1 with j - 1 - k cells in column k.
    """
    i, j = int(base[0]), int(base[1])
    d = grid.cells_of(delta, "delta")
    if axis == 2:
        cells = d * (j - i) + d * (d - 1) // 2
    elif axis == 1:
        cells = d * (j - 1 - i) - d * (d - 1) // 2
    else:
        raise ValueError(f"axis must be 1 or 2, got {axis!r}")
    if cells < 0:
        raise GridRangeError(f"axis-{axis} difference of {d} cells at ({i},{j}) leaves the region")
    return 0.25 * cells * grid.h**2
