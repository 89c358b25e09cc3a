"""Monte Carlo toolkit for the 1-D stochastic wave equation driven by
multiplicative space-time white noise, formulated in light-cone (null)
coordinates where the wave operator factors into two first-order
derivatives and the solution marches exactly over a triangular lattice.

The package samples lattice white noise, solves the nonlinear field and
its linear (unit-forcing) companion path by path, and runs statistical
experiments on local increments: the exact variance law of mixed second
differences, the eps^{3/2} decay of the local-linearization remainder in
both coordinate frames, the failure of single-axis linearization, L^2
regularity exponents, and small-deviation tail bounds.
"""

__version__ = "0.1.0"

from .errors import ConfigError, DataError, GridRangeError, NullwaveError, ProvenanceError
from .geometry import (
    InitialData,
    Nonlinearity,
    Profile,
    Stencil,
    apply_stencil,
    eval_V0,
    first_difference,
    from_null,
    map_original_stencil,
    mixed_second_difference,
    to_null,
)
from .noise import (
    CellRect,
    GridSpec,
    NoiseField,
    nested_corner_integrals,
    rectangle_integral,
    sample_noise,
    strip_integral,
)
from .solver import (
    RemainderSample,
    SolutionField,
    linear_axis_variance,
    linear_mixed_variance,
    remainder,
    solve_linear,
    solve_marching,
    solve_picard,
)
from .stats import SampleSet, fit_slope, lp_norm

__all__ = [
    "CellRect",
    "ConfigError",
    "DataError",
    "GridRangeError",
    "GridSpec",
    "InitialData",
    "NoiseField",
    "Nonlinearity",
    "NullwaveError",
    "Profile",
    "ProvenanceError",
    "RemainderSample",
    "SampleSet",
    "SolutionField",
    "Stencil",
    "apply_stencil",
    "eval_V0",
    "first_difference",
    "fit_slope",
    "from_null",
    "linear_axis_variance",
    "linear_mixed_variance",
    "lp_norm",
    "map_original_stencil",
    "mixed_second_difference",
    "nested_corner_integrals",
    "rectangle_integral",
    "remainder",
    "sample_noise",
    "solve_linear",
    "solve_marching",
    "solve_picard",
    "strip_integral",
    "to_null",
]
