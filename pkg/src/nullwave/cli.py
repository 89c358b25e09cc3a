"""Command-line entry points.

    nullwave run <config> [--paths N] [--seed S] [--out DIR] [--workers W]
    nullwave validate <config>
    nullwave solve-once <config> [--seed S] [--out DIR]

Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 invalid
configuration or resource-cap refusal.  ``NULLWAVE_OUT`` sets the default
output directory; ``NULLWAVE_BACKEND`` forces the kernel backend.
"""

import argparse
import sys
import time

from . import backend, report
from .config import parse_config_file
from .errors import ConfigError
from .experiments import run_experiment

EXIT_OK = 0
EXIT_VERDICT_FAILED = 1
EXIT_INVALID = 2


def _overrides(args) -> dict:
    return {
        "run.paths": getattr(args, "paths", None),
        "run.seed": getattr(args, "seed", None),
        "run.out_dir": getattr(args, "out", None),
        "run.workers": getattr(args, "workers", None),
    }


def _load(args, force_experiment=None):
    over = _overrides(args)
    if force_experiment:
        over["run.experiment"] = force_experiment
    return parse_config_file(args.config, over)


def _run(cfg) -> int:
    t0 = time.perf_counter()
    result = run_experiment(cfg)
    elapsed = time.perf_counter() - t0
    written = report.write_outputs(cfg.out_dir, cfg, result, elapsed)
    for path in written:
        print(f"wrote {path}")
    for flag in result.flags:
        print(f"note: {flag}")
    for key in sorted(result.verdicts):
        status = "pass" if result.verdicts[key] else "FAIL"
        print(f"verdict {status}: {key}")
    print(
        f"{result.experiment}: {'pass' if result.passed else 'FAIL'} "
        f"({elapsed:.1f}s, backend={backend.get_kernels().name})"
    )
    return EXIT_OK if result.passed else EXIT_VERDICT_FAILED


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nullwave",
        description=(
            "Monte Carlo experiments for the stochastic wave equation with "
            "multiplicative space-time white noise, in light-cone coordinates."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the experiment named in the config")
    p_run.add_argument("config")
    p_run.add_argument("--paths", type=int, help="override run.paths")
    p_run.add_argument("--seed", type=int, help="override run.seed")
    p_run.add_argument("--out", help="override run.out_dir")
    p_run.add_argument("--workers", type=int, help="override run.workers (hint only)")

    p_val = sub.add_parser("validate", help="check a config and report every problem")
    p_val.add_argument("config")

    p_solve = sub.add_parser("solve-once", help="dump one path's fields as CSV grids")
    p_solve.add_argument("config")
    p_solve.add_argument("--seed", type=int, help="override run.seed")
    p_solve.add_argument("--out", help="override run.out_dir")

    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            cfg = _load(args)
            print(f"config ok: experiment={cfg.experiment}")
            for line in sorted(f"{k} = {v}" for k, v in cfg.raw.items()):
                print(f"  {line}")
            return EXIT_OK
        if args.command == "solve-once":
            return _run(_load(args, force_experiment="solve_once"))
        return _run(_load(args))
    except ConfigError as exc:
        print(f"invalid configuration ({len(exc.errors)} problem(s)):", file=sys.stderr)
        for err in exc.errors:
            print(f"  - {err}", file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
