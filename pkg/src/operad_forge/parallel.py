"""Order-preserving map over independent work items.

Worker count comes from OPERAD_FORGE_THREADS (positive integer, default 1).
Results are returned in input order, so output never depends on scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .errors import ValidationError

ENV = "OPERAD_FORGE_THREADS"


def thread_count() -> int:
    raw = os.environ.get(ENV)
    if raw is None or raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ValidationError(f"{ENV} must be a positive integer, got {raw!r}")
    return n


def pmap(fn, items, threads: int | None = None) -> list:
    items = list(items)
    n = thread_count() if threads is None else threads
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
