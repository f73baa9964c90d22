import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "FLUXION_THREADS"


def thread_count() -> int:
    """Worker count from ``FLUXION_THREADS``; 0, unset or invalid means auto."""
    try:
        n = int(os.environ.get(ENV_THREADS, "0"))
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def ordered_map(fn, items: list) -> list:
    """``[fn(x) for x in items]``, possibly threaded; order always follows ``items``."""
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
