"""Exact temporal motif counts by chronological backtracking.

Every edge, in time order, is tried as the image of the motif's earliest
edge; later pattern edges are matched in time order among edges newer than
the previous match and no later than ``t0 + delta``.  When both endpoints of
a pattern edge are already mapped, candidates come from that vertex pair's
edge list; with one endpoint mapped, from its in/out list; otherwise from the
global time-sorted edge list.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernels
from .graph import TemporalGraph
from .motif import Motif
from .sampler import MAX_DELTA

DEFAULT_CAP = 10 ** 10


class WorkCapExceeded(RuntimeError):
    pass


def _run(g: TemporalGraph, m: Motif, delta: int, strict: bool, lo: int, hi: int,
         cap: int) -> tuple[int, int]:
    ps = np.array([a for a, _ in m.edges], dtype=np.int64)
    pd = np.array([b for _, b in m.edges], dtype=np.int64)
    return _kernels.backtrack_count(*g.kernel_arrays(), g.n, ps, pd, m.nv,
                                    min(int(delta), MAX_DELTA), strict, lo, hi, cap)


def exact_count(g: TemporalGraph, m: Motif, delta: int, strict: bool = True,
                cap: int = DEFAULT_CAP) -> int:
    """Number of ``m``-matches; raises :class:`WorkCapExceeded` past ``cap`` search steps."""
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if g.m == 0:
        return 0
    count, work = _run(g, m, delta, strict, 0, g.m, cap)
    if count == _kernels.CAP_EXCEEDED:
        raise WorkCapExceeded(f"search exceeded {cap} steps")
    return int(count)


def exact_count_parallel(g: TemporalGraph, m: Motif, delta: int, threads: int,
                         strict: bool = True, cap: int = DEFAULT_CAP,
                         chunk: int = 4096) -> int:
    """Same count as :func:`exact_count`, with root edges handed out in chunks to a pool."""
    if threads <= 1:
        return exact_count(g, m, delta, strict, cap)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    spans = [(s, min(s + chunk, g.m)) for s in range(0, g.m, chunk)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(lambda s: _run(g, m, delta, strict, s[0], s[1], cap), spans))
    if any(c == _kernels.CAP_EXCEEDED for c, _ in results) or sum(w for _, w in results) > cap:
        raise WorkCapExceeded(f"search exceeded {cap} steps")
    return sum(int(c) for c, _ in results)
