"""
Ordered parallel map for independent checks
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(func: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> List[R]:
    """
    Apply func to every item, optionally on a thread pool

    Args:
        func: Pure function to apply
        items: Inputs
        jobs: Number of worker threads; 1 runs inline

    Returns:
        Results in input order, whatever the schedule
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items))
