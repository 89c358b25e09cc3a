"""Deterministic parallel execution of per-path pipelines.

Each path is a pure function of (config, master seed, path index); the
runner only decides which thread computes which contiguous block of path
indices and writes results into a preallocated array by index.  The
output is therefore byte-identical for any worker count, including 1.
The heavy per-path work (Philox fills, kernel sweeps) releases the GIL,
so threads are enough; worker count is a hint with no observable effect.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

CHUNK = 32


def default_workers() -> int:
    return min(8, os.cpu_count() or 1)


def map_paths(path_fn, n_paths: int, width: int, workers: int | None = None) -> np.ndarray:
    """Evaluate ``path_fn(k) -> (width,) array`` for k = 0..n_paths-1.

    Returns the (n_paths, width) stack, ordered by path index.
    """
    workers = workers or default_workers()
    out = np.empty((n_paths, width))

    def run_block(lo: int, hi: int) -> None:
        for k in range(lo, hi):
            out[k, :] = path_fn(k)

    if workers <= 1 or n_paths <= CHUNK:
        run_block(0, n_paths)
        return out

    blocks = [(lo, min(lo + CHUNK, n_paths)) for lo in range(0, n_paths, CHUNK)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run_block, lo, hi) for lo, hi in blocks]
        for fut in futures:
            fut.result()
    return out
