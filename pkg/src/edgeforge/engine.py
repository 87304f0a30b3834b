"""Parallel-pattern skeletons: banded row map with a determinism contract.

Rows are statically partitioned into contiguous bands and dispatched to a
thread pool. The guarantee every stage relies on: for a pure per-row (or
per-band) function, the assembled output is bit-identical to the
sequential run, for any worker count and granularity. Reductions that
need global state (e.g. a maximum) are computed per band and combined in
fixed band order.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")

DEFAULT_WORKERS = os.cpu_count() or 1
DEFAULT_BAND_GRANULARITY = 16  # rows; amortizes dispatch overhead on small images


@dataclass
class WorkerConfig:
    workers: int = DEFAULT_WORKERS
    band_granularity: int = DEFAULT_BAND_GRANULARITY

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.band_granularity < 1:
            raise ValueError(f"band_granularity must be >= 1, got {self.band_granularity}")


@dataclass
class StageTiming:
    stage_name: str
    workers: int
    wall_ns: int
    rows_processed: int
    repetition: int = 0


def plan_bands(height: int, cfg: WorkerConfig) -> list[tuple[int, int]]:
    """Partition [0, height) into contiguous near-equal bands.

    Band size is max(band_granularity, ceil(height / workers)); only the
    trailing remainder band may be smaller than the granularity.
    """
    if height < 1:
        raise ValueError(f"height must be >= 1, got {height}")
    size = max(cfg.band_granularity, -(-height // cfg.workers))
    return [(start, min(start + size, height)) for start in range(0, height, size)]


def parallel_band_map(
    height: int,
    cfg: WorkerConfig,
    band_fn: Callable[[int, int], T],
    band_times: list[list[int]] | None = None,
) -> list[T]:
    """Run band_fn(start, end) over the planned bands, results in band order.

    band_fn must be pure with respect to shared inputs. If any band fails,
    the first failure (in band order) is re-raised after all in-flight
    bands have finished. When ``band_times`` is given, one list of
    per-band wall times (nanoseconds, band order) is appended per call.
    """
    bands = plan_bands(height, cfg)

    def timed(start: int, end: int) -> tuple[T, int]:
        t0 = time.perf_counter_ns()
        result = band_fn(start, end)
        return result, time.perf_counter_ns() - t0

    if cfg.workers == 1 or len(bands) == 1:
        outcomes = [timed(s, e) for s, e in bands]
    else:
        with ThreadPoolExecutor(max_workers=min(cfg.workers, len(bands))) as pool:
            futures = [pool.submit(timed, s, e) for s, e in bands]
            outcomes = []
            first_error = None
            for fut in futures:
                try:
                    outcomes.append(fut.result())
                except BaseException as err:  # noqa: BLE001 - re-raised below
                    if first_error is None:
                        first_error = err
            if first_error is not None:
                raise first_error
    if band_times is not None:
        band_times.append([t for _, t in outcomes])
    return [r for r, _ in outcomes]


def parallel_row_map(
    height: int,
    cfg: WorkerConfig,
    row_fn: Callable[[int], T],
) -> list[T]:
    """Apply a pure per-row function to rows 0..height-1, output in row order."""

    def band(start: int, end: int) -> list[T]:
        return [row_fn(row) for row in range(start, end)]

    results: list[T] = []
    for chunk in parallel_band_map(height, cfg, band):
        results.extend(chunk)
    return results


def combine_in_band_order(parts: Sequence[T], combine: Callable[[T, T], T]) -> T:
    """Fold per-band partials left-to-right, keeping reductions deterministic."""
    if not parts:
        raise ValueError("no partial results to combine")
    acc = parts[0]
    for part in parts[1:]:
        acc = combine(acc, part)
    return acc
