"""Optional process pool for independent evaluation jobs."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence

ENV_VAR = "PDC_THREADS"


def resolve_workers(requested: int | None = None, default: int = 1) -> int:
    """Explicit request, else ``$PDC_THREADS``, else ``default``."""
    if requested is None:
        env = os.environ.get(ENV_VAR, "").strip()
        try:
            requested = int(env) if env else default
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be an integer, got {env!r}") from None
    if requested < 1:
        raise ValueError("worker count must be at least 1")
    return requested


class Workers:
    """Maps a function over jobs, in a process pool when more than one worker
    is configured.  Results always come back in job order."""

    def __init__(self, count: int | None = None, default: int = 1):
        self.count = resolve_workers(count, default)

    @property
    def parallel(self) -> bool:
        return self.count > 1

    def map(self, fn: Callable, jobs: Iterable) -> list:
        jobs = list(jobs)
        if not self.parallel or len(jobs) < 2:
            return [fn(j) for j in jobs]
        with ProcessPoolExecutor(max_workers=min(self.count, len(jobs))) as ex:
            return list(ex.map(fn, jobs))


def chunks(items: Sequence, parts: int) -> list[list]:
    parts = max(1, min(parts, len(items)))
    return [list(items[i::parts]) for i in range(parts)]
