import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from ..exceptions import ConfigError

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


class SweepWorker:
    """Worker class for fanning independent grid points out over processes.

    Results come back in submission order whatever the completion order, so
    merged outputs are identical for any worker count.
    """

    def __init__(self, max_concurrent: int = 1, chunksize: Optional[int] = None):
        if isinstance(max_concurrent, bool) or not isinstance(max_concurrent, int):
            raise ConfigError(f"Invalid worker count: {max_concurrent!r}")
        if max_concurrent == 0:
            max_concurrent = os.cpu_count() or 1
        if max_concurrent < 0:
            raise ConfigError(f"Invalid worker count: {max_concurrent}")
        self.max_concurrent = max_concurrent
        self.chunksize = chunksize

    @property
    def is_serial(self) -> bool:
        return self.max_concurrent == 1

    def _chunksize(self, count: int) -> int:
        if self.chunksize:
            return self.chunksize
        return max(1, count // (self.max_concurrent * 4))

    def map(self, func: Callable[[T], R], items: Iterable[T]) -> List[R]:
        """Apply a picklable module-level func to every item, preserving order."""
        items = list(items)
        if not items:
            return []
        if self.is_serial or len(items) == 1:
            logger.debug(f"Running {len(items)} work items inline")
            return [func(item) for item in items]

        workers = min(self.max_concurrent, len(items))
        logger.info(f"Dispatching {len(items)} work items to {workers} processes")
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(func, items, chunksize=self._chunksize(len(items))))
