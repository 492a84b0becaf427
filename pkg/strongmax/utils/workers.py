from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List

from strongmax.utils.defaults import get_thread_count


def parallel_map(func: Callable, items: Iterable) -> List:
    """
    Applies *func* to every item, preserving input order in the result.
    Runs on a thread pool unless a single worker is configured.
    """

    items = list(items)
    workers = min(get_thread_count(), len(items))
    if workers <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
