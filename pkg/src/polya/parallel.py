"""Deterministic fan-out of a pure function over chunks of an integer range."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def chunks(lo, hi, pieces):
    """Split [lo, hi] into at most ``pieces`` contiguous, ordered subranges."""
    if lo > hi:
        return []
    size = max(1, (hi - lo + 1 + pieces - 1) // pieces)
    return [(a, min(a + size - 1, hi)) for a in range(lo, hi + 1, size)]


def run(fn, work, jobs=1):
    """map(fn, work) in order; a process pool when jobs > 1. Results are identical either way."""
    work = list(work)
    if jobs <= 1 or len(work) <= 1:
        return [fn(w) for w in work]
    with ProcessPoolExecutor(min(jobs, len(work))) as pool:
        return list(pool.map(fn, work))
