"""Process-wide worker setting and an order-preserving parallel map.

Enumeration scans split their index ranges with points.chunk_ranges and
feed the pieces through map_ordered, which always returns results in task
order.  Combined with associative reductions (sums, concatenation in range
order) this makes every numeric output independent of the worker count;
the count is an execution hint, never part of a cache key or a report row.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

from .errors import ValidationError

__all__ = ["get_workers", "map_ordered", "set_workers"]

_workers = 1

T = TypeVar("T")
R = TypeVar("R")


def set_workers(count: int) -> None:
    """Set the worker count used by subsequent enumeration scans."""
    global _workers
    if count < 1:
        raise ValidationError(f"worker count {count} must be >= 1")
    _workers = count


def get_workers() -> int:
    return _workers


def map_ordered(
    fn: Callable[[T], R], items: Iterable[T], workers: int | None = None
) -> list[R]:
    """Apply fn to every item, preserving input order in the result list."""
    tasks: Sequence[T] = list(items)
    count = get_workers() if workers is None else workers
    if count < 1:
        raise ValidationError(f"worker count {count} must be >= 1")
    if count == 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=count) as pool:
        return list(pool.map(fn, tasks))
