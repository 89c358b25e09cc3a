"""Experiment configuration: plain-text parsing, defaults, validation.

Config files are UTF-8 ``key = value`` text with one section per concern:

    [run]      experiment, seed, paths, workers, out_dir, bootstrap
    [grid]     origin, n, h
    [model]    u0, u1, F
    [observe]  base, epsilons, p, signs, axes, kappa, M, n_max

Only ``[run] experiment`` is required; everything else has a documented
per-experiment default.  Presets are written ``name`` or
``name:param1,param2`` (e.g. ``sine:1.0,3.0``, ``affine:0.5,0.0``);
scale lists are comma-separated or geometric ``geo:start,ratio,count``.
Validation reports every problem it finds, each with its key path and a
remedy hint, and a config that validates runs without range errors.
"""

import configparser
import math
import os
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConfigError
from .geometry import (
    SQRT2,
    InitialData,
    Nonlinearity,
    Profile,
    first_difference,
    map_original_stencil,
    mixed_second_difference,
)
from .noise import RESOURCE_CAP_N, GridSpec

RESOURCE_CAP_PATHS = 1_000_000
OUT_DIR_ENV = "NULLWAVE_OUT"
DEFAULT_SEED = 1729

EXPERIMENTS = (
    "variance_z",
    "remainder_scaling",
    "original_coords",
    "one_param_failure",
    "holder",
    "decay_probe",
    "solve_once",
)

_SLOPE_EXPERIMENTS = ("remainder_scaling", "original_coords", "one_param_failure", "holder")
_STAT_EXPERIMENTS = EXPERIMENTS[:-1]

_SECTIONS = {
    "run": ("experiment", "seed", "paths", "workers", "out_dir", "bootstrap"),
    "grid": ("origin", "n", "h"),
    "model": ("u0", "u1", "F"),
    "observe": ("base", "epsilons", "p", "signs", "axes", "kappa", "M", "n_max"),
}

_COMMON = {
    "seed": str(DEFAULT_SEED),
    "workers": "",
    "out_dir": "",
    "bootstrap": "1000",
    "u0": "zero",
    "u1": "zero",
    "base": "0.0, 1.0",
    "p": "2",
    "signs": "+",
    "axes": "1, 2",
    "kappa": "0.5",
    "M": "1.0",
    "n_max": "8",
}

_DEFAULTS = {
    "variance_z": {
        "origin": "0.0",
        "h": "0.05",
        "n": "24",
        "F": "one",
        "epsilons": "0.05, 0.1, 0.2",
        "paths": "100000",
    },
    "remainder_scaling": {
        "origin": "-0.125",
        "h": "0.0009765625",
        "n": "1280",
        "u0": "constant:0.5",
        "F": "tanh",
        "epsilons": "geo:0.125,0.5,4",
        "signs": "+, -",
        "paths": "2000",
    },
    "original_coords": {
        "origin": "-0.125",
        "h": "0.0009765625",
        "n": "1280",
        "u0": "constant:0.5",
        "F": "tanh",
        "epsilons": "geo:0.125,0.5,4",
        "paths": "2000",
    },
    "one_param_failure": {
        "origin": "0.0",
        "h": "0.001953125",
        "n": "512",
        "u0": "constant:0.5",
        "F": "tanh",
        "epsilons": "geo:0.125,0.5,4",
        "paths": "2000",
    },
    "holder": {
        "origin": "0.0",
        "h": "0.001953125",
        "n": "576",
        "u0": "constant:0.5",
        "F": "tanh",
        "epsilons": "geo:0.125,0.5,4",
        "paths": "2000",
    },
    "decay_probe": {
        "origin": "0.0",
        "h": "3.0517578125e-05",
        "n": "2",
        "F": "one",
        "epsilons": "",
        "paths": "100000",
    },
    "solve_once": {
        "origin": "0.0",
        "h": "0.0078125",
        "n": "256",
        "u0": "sine:1.0,1.0",
        "F": "tanh",
        "epsilons": "",
        "paths": "1",
    },
}


@dataclass
class ExperimentConfig:
    """Validated, fully-defaulted experiment description."""

    experiment: str
    seed: int
    paths: int
    workers: Optional[int]
    out_dir: str
    bootstrap: int
    grid_origin: float
    grid_n: int
    grid_h: float
    u0: Profile
    u1: Profile
    f: Nonlinearity
    base: tuple
    epsilons: tuple
    p_values: tuple
    signs: tuple
    axes: tuple
    kappa: float
    big_m: float
    n_max: int
    raw: dict = field(default_factory=dict, repr=False)

    def grid(self) -> GridSpec:
        return GridSpec(origin=(self.grid_origin, self.grid_origin), n=self.grid_n, h=self.grid_h)

    def initial_data(self) -> InitialData:
        return InitialData(self.u0, self.u1)

    def nonlinearity(self) -> Nonlinearity:
        return self.f

    def to_jsonable(self) -> dict:
        def preset_str(p):
            if not p.params:
                return p.name
            return p.name + ":" + ",".join(repr(v) for v in p.params)

        return {
            "experiment": self.experiment,
            "seed": self.seed,
            "paths": self.paths,
            "workers_hint": self.workers,
            "out_dir": self.out_dir,
            "bootstrap": self.bootstrap,
            "grid": {"origin": self.grid_origin, "n": self.grid_n, "h": self.grid_h},
            "model": {
                "u0": preset_str(self.u0),
                "u1": preset_str(self.u1),
                "F": preset_str(self.f),
            },
            "observe": {
                "base": list(self.base),
                "epsilons": list(self.epsilons),
                "p": list(self.p_values),
                "signs": ["+" if s > 0 else "-" for s in self.signs],
                "axes": list(self.axes),
                "kappa": self.kappa,
                "M": self.big_m,
                "n_max": self.n_max,
            },
        }


def _parse_preset(text, cls, path, errors):
    text = text.strip()
    name, _, rest = text.partition(":")
    params = []
    if rest.strip():
        for tok in rest.split(","):
            try:
                params.append(float(tok))
            except ValueError:
                errors.append(f"{path}: parameter {tok.strip()!r} is not a number")
                return None
    try:
        return cls(name.strip(), tuple(params))
    except ConfigError as exc:
        errors.extend(f"{path}: {e}" for e in exc.errors)
        return None


def _parse_float(text, path, errors, minimum=None, strict=False):
    try:
        v = float(text)
    except ValueError:
        errors.append(f"{path}: {text!r} is not a number")
        return None
    if not math.isfinite(v):
        errors.append(f"{path}: must be finite, got {text!r}")
        return None
    if minimum is not None and (v <= minimum if strict else v < minimum):
        op = ">" if strict else ">="
        errors.append(f"{path}: must be {op} {minimum}, got {v!r}")
        return None
    return v


def _parse_int(text, path, errors, minimum=None, maximum=None, cap_msg=""):
    try:
        v = int(str(text).strip())
    except ValueError:
        errors.append(f"{path}: {text!r} is not an integer")
        return None
    if minimum is not None and v < minimum:
        errors.append(f"{path}: must be >= {minimum}, got {v}")
        return None
    if maximum is not None and v > maximum:
        errors.append(f"{path}: {v} exceeds {maximum}{cap_msg}")
        return None
    return v


def _parse_scales(text, path, errors):
    text = text.strip()
    if not text:
        return ()
    if text.startswith("geo:"):
        toks = text[4:].split(",")
        if len(toks) != 3:
            errors.append(f"{path}: geometric spec needs geo:start,ratio,count")
            return None
        start = _parse_float(toks[0], path, errors, minimum=0.0, strict=True)
        ratio = _parse_float(toks[1], path, errors, minimum=0.0, strict=True)
        count = _parse_int(toks[2], path, errors, minimum=1)
        if None in (start, ratio, count):
            return None
        return tuple(start * ratio**k for k in range(count))
    out = []
    for tok in text.split(","):
        v = _parse_float(tok, path, errors, minimum=0.0, strict=True)
        if v is None:
            return None
        out.append(v)
    return tuple(out)


def _parse_pair(text, path, errors):
    toks = [t for t in text.split(",") if t.strip()]
    if len(toks) != 2:
        errors.append(f"{path}: expected two comma-separated numbers, got {text!r}")
        return None
    a = _parse_float(toks[0], path, errors)
    b = _parse_float(toks[1], path, errors)
    if a is None or b is None:
        return None
    return (a, b)


def _parse_signs(text, path, errors):
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok == "+":
            out.append(+1)
        elif tok == "-":
            out.append(-1)
        else:
            errors.append(f"{path}: signs are '+' or '-', got {tok!r}")
            return None
    if not out:
        errors.append(f"{path}: needs at least one sign")
        return None
    return tuple(dict.fromkeys(out))


def _read_keyvalues(text, errors):
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        errors.append(f"config syntax: {exc}")
        return {}
    values = {}
    for section in cp.sections():
        if section not in _SECTIONS:
            errors.append(
                f"[{section}]: unknown section; valid sections: {sorted(_SECTIONS)}"
            )
            continue
        for key, value in cp.items(section):
            if key not in _SECTIONS[section]:
                errors.append(
                    f"{section}.{key}: unknown key; valid keys in [{section}]: "
                    f"{sorted(_SECTIONS[section])}"
                )
                continue
            values[f"{section}.{key}"] = value
    return values


def _stencil_reach(cfg, errors):
    """Dry-run every stencil the experiment will evaluate against the grid."""
    try:
        grid = cfg.grid()
        base = grid.index_of(cfg.base, "observe.base")
    except ConfigError as exc:
        errors.extend(f"observe.base: {e}" for e in exc.errors)
        return
    i, j = base

    def check(stencil, what):
        for di, dj, _ in stencil.taps:
            ii, jj = i + di, j + dj
            if not (0 <= ii <= jj <= grid.n):
                errors.append(
                    f"{what}: tap ({di},{dj}) at base ({i},{j}) leaves the grid region "
                    f"0 <= i <= j <= {grid.n}; shrink epsilon or enlarge the grid"
                )
                return

    for col, eps in enumerate(cfg.epsilons):
        path = f"observe.epsilons[{col}]"
        try:
            if cfg.experiment in ("variance_z", "remainder_scaling"):
                for s in cfg.signs:
                    check(mixed_second_difference(eps, grid.h, sign=s), path)
                    if cfg.experiment == "variance_z" and s < 0 and i - grid.cells_of(eps) < 0:
                        errors.append(
                            f"{path}: '-' block needs {grid.cells_of(eps)} cells left of the "
                            f"base column {i}"
                        )
            elif cfg.experiment == "original_coords":
                for kind in (1, 2):
                    check(map_original_stencil(kind, eps / SQRT2, grid.h), path)
            elif cfg.experiment == "one_param_failure":
                check(first_difference(1, eps, grid.h), path)
            elif cfg.experiment == "holder":
                for axis in cfg.axes:
                    check(first_difference(axis, eps, grid.h), path)
        except ConfigError as exc:
            errors.extend(f"{path}: {e}" for e in exc.errors)


def _validate(cfg, errors):
    if cfg.experiment in _STAT_EXPERIMENTS and cfg.paths < 30:
        errors.append(
            f"run.paths: {cfg.paths} < 30; statistics are only reported for >= 30 paths"
        )
    for k, p in enumerate(cfg.p_values):
        if not (math.isfinite(p) and p >= 2):
            errors.append(f"observe.p[{k}]: must be finite and >= 2, got {p!r}")
    if cfg.experiment == "decay_probe":
        if cfg.kappa < 0:
            errors.append(f"observe.kappa: must be >= 0, got {cfg.kappa!r}")
        if cfg.big_m <= 0:
            errors.append(f"observe.M: must be > 0, got {cfg.big_m!r}")
        if cfg.n_max < 2:
            errors.append(f"observe.n_max: must be >= 2, got {cfg.n_max}")
        if cfg.kappa >= 0 and cfg.big_m > 0 and cfg.n_max >= 2:
            from .experiments import snapped_tail_scales

            try:
                snapped_tail_scales(cfg)
            except ConfigError as exc:
                errors.extend(f"grid.h: {e}" for e in exc.errors)
        return
    if not cfg.epsilons and cfg.experiment != "solve_once":
        errors.append("observe.epsilons: experiment needs at least one scale")
    if cfg.experiment in _SLOPE_EXPERIMENTS and cfg.f.lipschitz > 0:
        diag = cfg.base[1] - cfg.base[0]
        lo, hi = 8 * cfg.grid_h, 0.25 * diag
        in_window = [e for e in cfg.epsilons if lo * (1 - 1e-12) <= e <= hi * (1 + 1e-12)]
        if len(set(in_window)) < 3:
            errors.append(
                "observe.epsilons: slope fits need >= 3 distinct scales inside the fit "
                f"window [{lo!r}, {hi!r}] (8 cells to a quarter of the base separation); "
                f"got {sorted(set(in_window))}"
            )
    if cfg.experiment == "variance_z" and len(set(cfg.epsilons)) < 3:
        errors.append("observe.epsilons: variance_z needs >= 3 distinct scales for its slope check")
    if not errors and cfg.experiment != "solve_once":
        _stencil_reach(cfg, errors)


def _build(values, errors):
    experiment = values.get("run.experiment", "").strip()
    if experiment not in EXPERIMENTS:
        errors.append(
            f"run.experiment: {experiment!r} is not a known experiment; "
            f"valid: {list(EXPERIMENTS)}"
        )
        return None
    defaults = dict(_COMMON)
    defaults.update(_DEFAULTS[experiment])

    def get(section, key):
        return values.get(f"{section}.{key}", defaults.get(key, ""))

    seed = _parse_int(get("run", "seed"), "run.seed", errors, minimum=0, maximum=2**64 - 1)
    paths = _parse_int(
        get("run", "paths"), "run.paths", errors, minimum=1,
        maximum=RESOURCE_CAP_PATHS, cap_msg=" (resource cap; refusing to run)",
    )
    workers_txt = str(get("run", "workers")).strip()
    workers = None
    if workers_txt:
        workers = _parse_int(workers_txt, "run.workers", errors, minimum=1)
    bootstrap = _parse_int(get("run", "bootstrap"), "run.bootstrap", errors, minimum=1)
    out_dir = str(get("run", "out_dir")).strip() or os.environ.get(OUT_DIR_ENV, "nullwave_out")

    origin = _parse_float(get("grid", "origin"), "grid.origin", errors)
    grid_n = _parse_int(
        get("grid", "n"), "grid.n", errors, minimum=2,
        maximum=RESOURCE_CAP_N, cap_msg=" (resource cap; refusing to allocate)",
    )
    grid_h = _parse_float(get("grid", "h"), "grid.h", errors, minimum=0.0, strict=True)

    u0 = _parse_preset(get("model", "u0"), Profile, "model.u0", errors)
    u1 = _parse_preset(get("model", "u1"), Profile, "model.u1", errors)
    f = _parse_preset(get("model", "F"), Nonlinearity, "model.F", errors)

    base = _parse_pair(get("observe", "base"), "observe.base", errors)
    epsilons = _parse_scales(get("observe", "epsilons"), "observe.epsilons", errors)
    p_values = _parse_scales(get("observe", "p"), "observe.p", errors)
    signs = _parse_signs(get("observe", "signs"), "observe.signs", errors)
    axes_txt = get("observe", "axes")
    axes = []
    for tok in str(axes_txt).split(","):
        if tok.strip():
            v = _parse_int(tok, "observe.axes", errors, minimum=1, maximum=2)
            if v is not None:
                axes.append(v)
    kappa = _parse_float(get("observe", "kappa"), "observe.kappa", errors)
    big_m = _parse_float(get("observe", "M"), "observe.M", errors)
    n_max = _parse_int(get("observe", "n_max"), "observe.n_max", errors, minimum=1)

    if errors:
        return None
    cfg = ExperimentConfig(
        experiment=experiment,
        seed=seed,
        paths=paths,
        workers=workers,
        out_dir=out_dir,
        bootstrap=bootstrap,
        grid_origin=origin,
        grid_n=grid_n,
        grid_h=grid_h,
        u0=u0,
        u1=u1,
        f=f,
        base=base,
        epsilons=epsilons,
        p_values=tuple(p_values),
        signs=signs,
        axes=tuple(dict.fromkeys(axes)),
        kappa=kappa,
        big_m=big_m,
        n_max=n_max,
        raw=dict(values),
    )
    return cfg


def parse_config(text: str, overrides: dict | None = None) -> ExperimentConfig:
    """Parse and fully validate a config; raises ConfigError listing all problems.

    ``overrides`` maps key paths (e.g. ``run.paths``) to replacement raw
    values; command-line flags take precedence over file values this way.
    """
    errors: list[str] = []
    values = _read_keyvalues(text, errors)
    if overrides:
        for path, value in overrides.items():
            if value is not None:
                values[path] = str(value)
    cfg = _build(values, errors)
    if cfg is not None:
        _validate(cfg, errors)
    if errors:
        raise ConfigError(errors)
    return cfg


def parse_config_file(path, overrides: dict | None = None) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), overrides)
