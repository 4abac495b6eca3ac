"""Order-preserving parallel map used by the enumeration sweeps."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def pmap(fn, items, jobs: int = 1) -> list:
    """``[fn(i) for i in items]``, optionally spread over ``jobs`` processes.

    Results always come back in input order, so any reduction applied to
    them afterwards is independent of the worker count.
    """
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def chunked(seq, n: int) -> list:
    """Split a sequence into ``n`` contiguous chunks of near-equal length."""
    seq = list(seq)
    n = max(1, min(n, len(seq)))
    k, r = divmod(len(seq), n)
    out, start = [], 0
    for i in range(n):
        end = start + k + (1 if i < r else 0)
        out.append(seq[start:end])
        start = end
    return out
