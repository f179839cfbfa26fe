"""Counter-based random streams, one per (purpose, context index).

Every context draws from its own Philox generator keyed by
``SeedSequence(seed, spawn_key=(purpose, index))``. Results therefore do not depend
on how many workers process the contexts or in which order.
"""

from __future__ import annotations

import os
from typing import Optional

import numpy as np

from probability_table import InvalidArgumentError

THREADS_ENV = "CONTEXT_TOOLKIT_THREADS"
DEFAULT_MAX_THREADS = 8

SAMPLING_STREAM = 1
JITTER_STREAM = 2


def context_stream(seed: int, purpose: int, index: int) -> np.random.Generator:
    if seed < 0:
        raise InvalidArgumentError(f"Seed must be non-negative, got {seed}")
    sequence = np.random.SeedSequence(seed, spawn_key=(purpose, index))
    return np.random.Generator(np.random.Philox(sequence))


def worker_count(requested: Optional[int] = None) -> int:
    """Size of the per-context worker pool, capped by CONTEXT_TOOLKIT_THREADS."""
    default = min(DEFAULT_MAX_THREADS, os.cpu_count() or 1)
    raw = os.environ.get(THREADS_ENV)
    cap = default
    if raw is not None and raw.strip():
        try:
            cap = int(raw)
        except ValueError:
            raise InvalidArgumentError(f"{THREADS_ENV} must be an integer, got {raw!r}")
        if cap < 1:
            raise InvalidArgumentError(f"{THREADS_ENV} must be at least 1, got {cap}")
    if requested is None:
        return cap
    if requested < 1:
        raise InvalidArgumentError(f"Worker count must be at least 1, got {requested}")
    return min(requested, cap)


__all__ = [
    "JITTER_STREAM",
    "SAMPLING_STREAM",
    "THREADS_ENV",
    "context_stream",
    "worker_count",
]
