"""
Progress Reporting and Parallel Map

ordered_map runs independent work items in a thread pool and hands results
back in input order, so that sums and reports built from them do not depend
on completion order. A tqdm bar is drawn on stderr only when asked for.
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any, Callable, List, Optional, Sequence

try:
    from tqdm import tqdm
    TQDM_AVAILABLE = True
except ImportError:
    TQDM_AVAILABLE = False

logger = logging.getLogger(__name__)


def ordered_map(func: Callable[[Any], Any], items: Sequence[Any], workers: int = 1,
                desc: Optional[str] = None, show_progress: bool = False) -> List[Any]:
    """
    Apply ``func`` to every item; results come back in input order.

    Args:
        func: Function applied to each item
        items: Work items
        workers: Thread count; 1 runs inline
        desc: Label for the progress bar
        show_progress: Draw a tqdm bar (ignored when tqdm is missing)

    Returns:
        List of results, one per item

    Raises:
        The first exception raised by ``func`` (remaining work is cancelled)
    """
    items = list(items)
    bar = None
    if show_progress and TQDM_AVAILABLE and items:
        bar = tqdm(total=len(items), desc=desc or "working", unit="item", leave=False)

    try:
        if workers <= 1 or len(items) <= 1:
            results: List[Any] = []
            for item in items:
                results.append(func(item))
                if bar is not None:
                    bar.update(1)
            return results

        results = [None] * len(items)
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(func, item): i for i, item in enumerate(items)}
            try:
                for future in as_completed(futures):
                    results[futures[future]] = future.result()
                    if bar is not None:
                        bar.update(1)
            except Exception:
                for future in futures:
                    future.cancel()
                raise
        return results
    finally:
        if bar is not None:
            bar.close()
