"""Order-preserving chunked map over a process pool."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def max_workers() -> int:
    return os.cpu_count() or 1


def resolve_workers(workers: int | None) -> int:
    """``None`` or ``0`` means one worker per CPU."""
    if not workers:
        return max_workers()
    if workers < 0:
        raise ValueError(f"workers must be >= 0, got {workers}")
    return workers


def chunked(items: Sequence[T], n_chunks: int) -> list[Sequence[T]]:
    n_chunks = max(1, min(n_chunks, len(items)))
    size, extra = divmod(len(items), n_chunks)
    out = []
    start = 0
    for i in range(n_chunks):
        stop = start + size + (1 if i < extra else 0)
        out.append(items[start:stop])
        start = stop
    return out


def map_chunks(
    fn: Callable[[Sequence[T]], R], items: Sequence[T], workers: int | None = 1
) -> list[R]:
    """Apply ``fn`` to contiguous chunks of ``items`` and return results in chunk order.

    With one worker (or a single chunk) everything runs in-process. The
    chunk boundaries never influence the caller's merged result as long as
    the caller's merge is associative, which every user in this package
    guarantees by canonical sorting.
    """
    workers = resolve_workers(workers)
    if workers == 1 or len(items) < 2:
        return [fn(items)]
    chunks = chunked(items, workers)
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        return list(pool.map(fn, chunks))
