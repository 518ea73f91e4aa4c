"""Deterministic data-parallel map with a QCAPAX_THREADS worker cap."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["thread_count", "parallel_map"]


def thread_count() -> int:
    """Worker count from QCAPAX_THREADS; 0 or unset means auto."""
    raw = os.environ.get("QCAPAX_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        return min(8, os.cpu_count() or 1)
    return n


def parallel_map(fn, items) -> list:
    """Map ``fn`` over ``items`` preserving order (results merge by index)."""
    items = list(items)
    workers = thread_count()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
