"""
Concurrent case runner.
Independent cases are dispatched to a process pool from an asyncio coroutine;
results come back sorted by case key whatever the completion order.
"""
import asyncio
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, Tuple, TypeVar

from burgerslab.core.logger import get_logger

logger = get_logger(__name__)

A = TypeVar("A")
R = TypeVar("R")
Key = Tuple


async def run_sweep_async(
    func: Callable[[A], R], items: Sequence[Tuple[Key, A]], workers: int
) -> List[Tuple[Key, R]]:
    """
    Run func on every argument of items in a pool of worker processes.

    Args:
        func: picklable module-level function
        items: (key, argument) pairs; keys order the result
        workers: pool size

    Returns:
        (key, result) pairs sorted by key
    """
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [loop.run_in_executor(pool, func, argument) for _, argument in items]
        results = await asyncio.gather(*futures)
    pairs = [(key, result) for (key, _), result in zip(items, results)]
    for key, _ in pairs:
        logger.debug("sweep.case_done", key=key)
    return sorted(pairs, key=lambda pair: pair[0])


def run_sweep(
    func: Callable[[A], R], items: Sequence[Tuple[Key, A]], workers: int = 1
) -> List[Tuple[Key, R]]:
    """Synchronous entry point; workers == 1 runs every case in this process."""
    logger.info("sweep.started", cases=len(items), workers=workers)
    if workers <= 1 or len(items) <= 1:
        pairs = []
        for key, argument in items:
            pairs.append((key, func(argument)))
            logger.debug("sweep.case_done", key=key)
        pairs.sort(key=lambda pair: pair[0])
    else:
        pairs = asyncio.run(run_sweep_async(func, items, min(workers, len(items))))
    logger.info("sweep.finished", cases=len(pairs))
    return pairs
