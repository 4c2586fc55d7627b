"""Block partitioning and an order-preserving worker pool."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Iterator, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def split_range(lo: int, hi: int, block: int) -> list[tuple[int, int]]:
    """Cut ``[lo, hi]`` into consecutive closed blocks of at most ``block`` values.

    The cut points depend only on the range, never on the worker count.
    """
    if hi < lo:
        return []
    return [(a, min(a + block - 1, hi)) for a in range(lo, hi + 1, block)]


def map_blocks(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> Iterator[R]:
    """``map(fn, items)`` over ``jobs`` processes; results come back in input order."""
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    items = list(items)
    if jobs == 1 or len(items) <= 1:
        yield from map(fn, items)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(fn, items)
