"""Shared worker pool for multi-start searches and sample sweeps.

QCAP_THREADS caps the number of workers (default: hardware concurrency).
Results are always returned in task-index order and every task derives
its own random stream, so output is deterministic regardless of how the
pool schedules the work.  Nested calls run serially to avoid
oversubscription.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor

_local = threading.local()


def worker_count() -> int:
    env = os.environ.get("QCAP_THREADS")
    if env is not None:
        try:
            n = int(env)
        except ValueError as exc:
            raise ValueError(f"QCAP_THREADS must be an integer, got {env!r}") from exc
        return max(1, n)
    return os.cpu_count() or 1


def run_indexed(fn, n_items: int) -> list:
    """Evaluate fn(i) for i in range(n_items); results in index order."""
    if n_items <= 0:
        return []
    workers = min(worker_count(), n_items)
    if workers <= 1 or getattr(_local, "inside", False):
        return [fn(i) for i in range(n_items)]

    def worker(i):
        _local.inside = True
        try:
            return fn(i)
        finally:
            _local.inside = False

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, range(n_items)))
