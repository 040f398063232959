from __future__ import annotations

from typing import Callable, Iterable


def pmap(fn: Callable, jobs: Iterable, threads: int = 1) -> list:
    """Ordered map, optionally over a process pool. Output order follows ``jobs``."""
    jobs = list(jobs)
    if threads <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, jobs))
