"""Ordered shard execution.

Results always come back in task order, so merged outputs do not depend on
the worker count.  ``stop`` lets a caller cancel every task after the first
result that settles the answer.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def default_workers():
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:
        return os.cpu_count() or 1


def ordered_map(fn, tasks, workers=1, stop=None):
    """Yield ``fn(task)`` in task order; stop after the first result with ``stop(result)``."""
    tasks = list(tasks)
    if workers is None:
        workers = default_workers()
    if workers <= 1 or len(tasks) <= 1:
        for task in tasks:
            res = fn(task)
            yield res
            if stop is not None and stop(res):
                return
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, task) for task in tasks]
        try:
            for fut in futures:
                res = fut.result()
                yield res
                if stop is not None and stop(res):
                    return
        finally:
            for fut in futures:
                fut.cancel()
