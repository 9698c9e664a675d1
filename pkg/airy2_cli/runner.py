import multiprocessing as mp
import time
from typing import Any, Callable, Iterable, List, Optional, Sequence

from .logging import get_logger

logger = get_logger(__name__)


def run_parallel(
    func: Callable[[Any], Any],
    items: Iterable[Any],
    cores: int = 1,
    initializer: Optional[Callable[..., None]] = None,
    initargs: Sequence[Any] = (),
    label: str = "sweep",
) -> List[Any]:
    """Map a module-level function over items, in order."""
    items = list(items)
    logger.info(
        "running: %s over %d items on %d cores", label, len(items), cores
    )
    t0 = time.time()
    if cores <= 1 or len(items) <= 1:
        if initializer is not None:
            initializer(*initargs)
        results = [func(item) for item in items]
    else:
        with mp.Pool(
            processes=min(cores, len(items)),
            initializer=initializer,
            initargs=tuple(initargs),
        ) as pool:
            results = pool.map(func, items, chunksize=1)
    logger.info("finished in: %s seconds", f"{time.time() - t0:.1f}")
    return results
