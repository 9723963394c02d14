import concurrent.futures as cf
import logging
from typing import Callable, List, Sequence, TypeVar

from pressure_lab.config import THREADS

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def map_ordered(fn: Callable[[T], R], items: Sequence[T], threads: int = THREADS) -> List[R]:
    """Apply fn to every item, possibly on a thread pool; results come back in input order."""
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    workers = min(threads, len(items))
    logger.debug(f"dispatching {len(items)} work items to {workers} threads")
    with cf.ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def chunked(items: Sequence[T], size: int) -> List[Sequence[T]]:
    return [items[i : i + size] for i in range(0, len(items), max(1, size))]
