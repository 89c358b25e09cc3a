"""Deterministic CSV/JSON emission.

Every byte written here is a function of (config, master seed): floats
are rendered with shortest round-trip ``repr``, JSON keys are sorted, and
wall-clock timing goes to a separate sidecar file so the data files can
be compared bit-for-bit across reruns and worker counts.
"""

import csv
import json
from pathlib import Path

import numpy as np

from . import __version__, backend
from .geometry import from_null

SCHEMA_VERSION = 1
CSV_COLUMNS = ("epsilon", "p", "sign", "norm", "ci_lo", "ci_hi", "n_paths")
FIELD_CSV_COLUMNS = ("i", "j", "x1", "x2", "t", "x", "value")


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_norm_csv(path, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow(
                [_fmt(r.eps), _fmt(r.p), r.sign, _fmt(r.norm), _fmt(r.ci_lo), _fmt(r.ci_hi), r.n_paths]
            )


def result_to_jsonable(cfg, result) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "experiment": result.experiment,
        "config": cfg.to_jsonable(),
        "backend": backend.get_kernels().name,
        "versions": {"nullwave": __version__, "numpy": np.__version__},
        "rows": [
            {
                "epsilon": r.eps,
                "p": r.p,
                "sign": r.sign,
                "norm": r.norm,
                "ci_lo": r.ci_lo,
                "ci_hi": r.ci_hi,
                "n_paths": r.n_paths,
            }
            for r in result.rows
        ],
        "results": result.summary,
        "verdicts": result.verdicts,
        "flags": list(result.flags),
        "passed": result.passed,
    }


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_field_csv(path, grid, values) -> None:
    """Dump the j >= i lattice region with both coordinate frames."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(FIELD_CSV_COLUMNS)
        for i in range(grid.npts):
            x1 = grid.origin[0] + i * grid.h
            for j in range(i, grid.npts):
                x2 = grid.origin[1] + j * grid.h
                t, x = from_null((x1, x2))
                writer.writerow(
                    [i, j, _fmt(x1), _fmt(x2), _fmt(t), _fmt(x), _fmt(values[i, j])]
                )


def write_outputs(out_dir, cfg, result, elapsed: float) -> list:
    """Write all artifacts for one run; returns the data file paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    name = result.experiment
    if name == "solve_once":
        for tag in ("solution", "linear", "initial"):
            p = out / f"field_{tag}.csv"
            write_field_csv(p, cfg.grid(), result.samples[tag])
            written.append(p)
    else:
        p = out / f"{name}.csv"
        write_norm_csv(p, result.rows)
        written.append(p)
        for tag, rows in result.extra_row_tables.items():
            p = out / f"{name}_{tag}.csv"
            write_norm_csv(p, rows)
            written.append(p)
    jpath = out / f"{name}.json"
    write_json(jpath, result_to_jsonable(cfg, result))
    written.append(jpath)
    # volatile metadata only; excluded from the determinism contract
    with open(out / "timing.txt", "w", encoding="utf-8") as fh:
        fh.write(f"{name} wall_seconds {elapsed:.3f}\n")
    return written
