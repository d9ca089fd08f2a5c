"""Chunked, order-independent execution of Monte Carlo kernels.

Trials are split into fixed-size chunks; chunk i always draws from
``stream.child(i)``, so merged results do not depend on the worker count.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

from ..rng import RngStream

WORKERS_ENV = "FORRELATION_WORKERS"


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _call(args):
    kernel, stream, size, extra = args
    return kernel(stream.generator(), size, *extra)


def run_chunks(kernel: Callable, stream: RngStream, total: int, chunk: int,
               *extra, workers: int | None = None) -> list:
    """Evaluate ``kernel(generator, size, *extra)`` over all chunks, in chunk order."""
    if total < 0 or chunk < 1:
        raise ValueError("need total >= 0 and chunk >= 1")
    tasks = []
    for i, lo in enumerate(range(0, total, chunk)):
        tasks.append((kernel, stream.child(i), min(chunk, total - lo), extra))
    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1 or len(tasks) <= 1:
        return [_call(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(_call, tasks))


def merge_sum(results: list):
    """Elementwise sum of equally-shaped tuples / arrays from chunk kernels."""
    total = results[0]
    for r in results[1:]:
        total = tuple(a + b for a, b in zip(total, r)) if isinstance(total, tuple) else total + r
    return total
