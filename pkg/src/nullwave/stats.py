"""Monte Carlo moment estimators, log-log slope fits, and report types.

Norms are plain empirical p-th moments (no variance reduction), with
percentile bootstrap confidence intervals over paths; slopes come from
ordinary least squares on (log scale, log norm) with the standard
residual-variance standard error.  All randomness used here (bootstrap
resampling) is seeded deterministically from the master seed and a label,
so reports are pure functions of (samples, config).
"""

import zlib
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from .errors import DataError

MIN_PATHS_FOR_STATS = 30
BOOTSTRAP_CHUNK = 200


def lp_norm(values, p: float) -> float:
    """Empirical L^p norm over paths: (mean |v|^p)^(1/p)."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise DataError("lp_norm of an empty sample")
    if not (np.isfinite(p) and p >= 2):
        raise DataError(f"p must be finite and >= 2, got {p!r}")
    return float(np.mean(np.abs(v) ** p) ** (1.0 / p))


def standard_error(values) -> float:
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        raise DataError("standard error needs at least two samples")
    return float(np.std(v, ddof=1) / np.sqrt(v.size))


def fit_slope(points) -> tuple[float, float]:
    """OLS slope of log(norm) against log(scale) with its standard error."""
    pts = [(float(x), float(y)) for x, y in points]
    xs = np.array([x for x, _ in pts])
    ys = np.array([y for _, y in pts])
    if np.unique(xs).size < 3:
        raise DataError(f"slope fit needs >= 3 distinct scales, got {np.unique(xs).size}")
    if np.any(ys <= 0) or not np.all(np.isfinite(ys)):
        raise DataError("slope fit needs strictly positive finite norms")
    res = sps.linregress(np.log(xs), np.log(ys))
    return float(res.slope), float(res.stderr)


def bootstrap_rng(master_seed: int, label: str) -> np.random.Generator:
    """Deterministic resampling stream derived from the master seed and a label."""
    return np.random.default_rng(
        [int(master_seed) & (2**64 - 1), 0xB00757A9, zlib.crc32(label.encode())]
    )


def bootstrap_norm_ci(values, p: float, resamples: int, rng) -> tuple[float, float]:
    """Percentile bootstrap CI (2.5%, 97.5%) of the L^p norm over paths."""
    v = np.abs(np.asarray(values, dtype=float)) ** p
    if resamples < 1:
        raise DataError(f"bootstrap needs >= 1 resamples, got {resamples}")
    est = np.empty(resamples)
    done = 0
    while done < resamples:
        m = min(BOOTSTRAP_CHUNK, resamples - done)
        idx = rng.integers(0, v.size, size=(m, v.size))
        est[done : done + m] = np.mean(v[idx], axis=1) ** (1.0 / p)
        done += m
    lo, hi = np.percentile(est, [2.5, 97.5])
    return float(lo), float(hi)


@dataclass
class NormRow:
    """One CSV row: the estimated norm at one (scale, p, variant)."""

    eps: float
    p: float
    sign: str
    norm: float
    ci_lo: float
    ci_hi: float
    n_paths: int


@dataclass
class SampleSet:
    """Per-path scalar observables at one base point across scales.

    ``values`` has shape (paths, len(scales)); every path shares the full
    configuration except its path index.
    """

    observable: str
    base: tuple
    scales: np.ndarray
    values: np.ndarray
    sign: str
    master_seed: int

    def __post_init__(self):
        self.scales = np.asarray(self.scales, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[1] != self.scales.size:
            raise DataError(
                f"values shape {self.values.shape} does not match {self.scales.size} scales"
            )

    @property
    def n_paths(self) -> int:
        return self.values.shape[0]

    def norm_rows(self, p: float, resamples: int) -> list[NormRow]:
        if self.n_paths < MIN_PATHS_FOR_STATS:
            raise DataError(
                f"{self.observable}: {self.n_paths} paths < {MIN_PATHS_FOR_STATS} "
                "needed for reported statistics"
            )
        rng = bootstrap_rng(self.master_seed, f"{self.observable}|{self.sign}|p={p}")
        rows = []
        for col, eps in enumerate(self.scales):
            vals = self.values[:, col]
            lo, hi = bootstrap_norm_ci(vals, p, resamples, rng)
            rows.append(
                NormRow(
                    eps=float(eps),
                    p=float(p),
                    sign=self.sign,
                    norm=lp_norm(vals, p),
                    ci_lo=lo,
                    ci_hi=hi,
                    n_paths=self.n_paths,
                )
            )
        return rows


@dataclass
class ExperimentResult:
    """Everything one experiment produces.

    ``rows`` feed the CSV writers; ``summary`` is the JSON-serializable
    detail block; ``samples`` keeps raw per-path arrays in memory for
    cross-checks and is never written out.
    """

    experiment: str
    rows: list
    summary: dict
    verdicts: dict
    flags: list = field(default_factory=list)
    samples: dict = field(default_factory=dict, repr=False)
    extra_row_tables: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())


def slope_summary(points, declared: float | None) -> dict:
    slope, stderr = fit_slope(points)
    out = {"slope": slope, "stderr": stderr}
    if declared is not None:
        out["declared_exponent"] = declared
    return out
