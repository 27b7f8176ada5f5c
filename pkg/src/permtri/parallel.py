"""Order-preserving fan-out over a process pool."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def chunked(seq, size):
    seq = list(seq)
    return [seq[i:i + size] for i in range(0, len(seq), size)]


def ordered_map(fn, tasks, workers: int = 1):
    """``[fn(*t) for t in tasks]``, optionally on ``workers`` processes.

    Results always come back in task order, so merged output does not depend
    on the worker count.
    """
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *t) for t in tasks]
        return [f.result() for f in futures]
