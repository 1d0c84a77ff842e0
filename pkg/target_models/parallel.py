"""
Index-ordered thread pool helpers shared by ensembles, shadows and trials.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, TypeVar

import psutil
from tqdm import tqdm

logger = logging.getLogger(__name__)

T = TypeVar("T")


def default_workers() -> int:
    """Physical core count, falling back to 1."""
    return psutil.cpu_count(logical=False) or 1


def run_indexed(task: Callable[[int], T], count: int, workers: Optional[int] = None,
                desc: Optional[str] = None, progress: bool = False) -> List[T]:
    """Run task(0..count-1) on a thread pool; results come back in index order."""
    workers = max(1, workers or default_workers())
    bar = tqdm(total=count, desc=desc, disable=not progress, leave=False)
    try:
        if workers == 1 or count <= 1:
            results = []
            for i in range(count):
                results.append(task(i))
                bar.update(1)
            return results
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(task, i) for i in range(count)]
            results = []
            for fut in futures:
                results.append(fut.result())
                bar.update(1)
            return results
    finally:
        bar.close()
