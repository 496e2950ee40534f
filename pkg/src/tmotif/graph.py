"""Time-indexed directed multigraph.

Edges are stored once, sorted by ``(t, input order)``; an edge's id is its
position in that order.  Because ids are monotone in time, any closed time
window ``[lo, hi]`` maps to a half-open id range, and every adjacency list
below is kept sorted by id.  All window queries therefore reduce to two
binary searches on an id-sorted slice.

Layout (all ``int64`` numpy arrays)::

    src, dst, t                 per edge, length m
    out_ptr / out_eid           CSR: out_eid[out_ptr[v]:out_ptr[v+1]] = ids of edges leaving v
    in_ptr / in_eid             CSR for edges entering v
    pair_keys / pair_ptr / pair_eid
                                one entry per ordered pair (u, v) with >= 1 edge;
                                pair_keys[k] = u * n + v, sorted; the pair's edge
                                ids are pair_eid[pair_ptr[k]:pair_ptr[k+1]]
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

log = logging.getLogger(__name__)

_COMMENT_PREFIXES = ("#", "%")
_SPLITTERS = {"whitespace": re.compile(r"[ \t]+"), "csv": re.compile(r"\s*,\s*")}


class GraphFormatError(ValueError):
    """Raised for unreadable or semantically invalid edge-list input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class TemporalEdge(NamedTuple):
    src: int
    dst: int
    t: int
    id: int


def _csr(owner: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # stable sort keeps ids ascending inside each block
    order = np.argsort(owner, kind="stable")
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(owner, minlength=n), out=ptr[1:])
    return ptr, order.astype(np.int64)


@dataclass(frozen=True, eq=False)
class TemporalGraph:
    n: int
    m: int
    src: np.ndarray
    dst: np.ndarray
    t: np.ndarray
    out_ptr: np.ndarray
    out_eid: np.ndarray
    in_ptr: np.ndarray
    in_eid: np.ndarray
    pair_keys: np.ndarray
    pair_ptr: np.ndarray
    pair_eid: np.ndarray
    labels: np.ndarray

    @classmethod
    def from_arrays(
        cls,
        src: Sequence[int] | np.ndarray,
        dst: Sequence[int] | np.ndarray,
        t: Sequence[int] | np.ndarray,
        n: int | None = None,
        labels: np.ndarray | None = None,
        keep_self_loops: bool = False,
    ) -> "TemporalGraph":
        """Build a graph from dense vertex ids; input order breaks timestamp ties."""
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        t = np.asarray(t, dtype=np.int64).ravel()
        if not (src.shape == dst.shape == t.shape):
            raise ValueError("src, dst and t must have equal length")
        if t.size and t.min() < 0:
            raise GraphFormatError("negative timestamp")
        if src.size and min(src.min(), dst.min()) < 0:
            raise ValueError("vertex ids must be non-negative")
        if not keep_self_loops and np.any(src == dst):
            raise ValueError("self-loops present; pass keep_self_loops=True to keep them")
        if n is None:
            n = int(max(src.max(), dst.max()) + 1) if src.size else 0
        elif src.size and max(src.max(), dst.max()) >= n:
            raise ValueError("vertex id out of range")

        order = np.argsort(t, kind="stable")
        src, dst, t = src[order], dst[order], t[order]
        m = int(t.size)

        out_ptr, out_eid = _csr(src, n)
        in_ptr, in_eid = _csr(dst, n)

        keys = src * np.int64(max(n, 1)) + dst
        pair_eid = np.argsort(keys, kind="stable").astype(np.int64)
        sorted_keys = keys[pair_eid]
        if m:
            starts = np.flatnonzero(np.r_[True, sorted_keys[1:] != sorted_keys[:-1]])
        else:
            starts = np.zeros(0, dtype=np.int64)
        pair_keys = sorted_keys[starts]
        pair_ptr = np.append(starts, m).astype(np.int64)

        if labels is None:
            labels = np.arange(n, dtype=np.int64)
        for arr in (src, dst, t, out_ptr, out_eid, in_ptr, in_eid, pair_keys, pair_ptr, pair_eid):
            arr.flags.writeable = False
        return cls(n, m, src, dst, t, out_ptr, out_eid, in_ptr, in_eid,
                   pair_keys, pair_ptr, pair_eid, np.asarray(labels))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int, int]], **kw) -> "TemporalGraph":
        edges = list(edges)
        if not edges:
            return cls.from_arrays([], [], [], n=kw.pop("n", 0), **kw)
        s, d, t = zip(*edges)
        return cls.from_arrays(s, d, t, **kw)

    # -- basic access ---------------------------------------------------

    def edge(self, eid: int) -> TemporalEdge:
        return TemporalEdge(int(self.src[eid]), int(self.dst[eid]), int(self.t[eid]), int(eid))

    @property
    def edges(self) -> list[TemporalEdge]:
        return [self.edge(i) for i in range(self.m)]

    @property
    def time_span(self) -> int:
        return int(self.t[-1] - self.t[0]) if self.m else 0

    def kernel_arrays(self) -> tuple:
        """Positional bundle consumed by the compiled kernels."""
        return (self.src, self.dst, self.t, self.out_ptr, self.out_eid,
                self.in_ptr, self.in_eid, self.pair_keys, self.pair_ptr, self.pair_eid)

    @cached_property
    def out_keys(self) -> np.ndarray:
        """``src * m + id`` in ``out_eid`` order; sorted, for vectorized window search."""
        owner = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.out_ptr))
        return owner * np.int64(self.m) + self.out_eid

    @cached_property
    def in_keys(self) -> np.ndarray:
        owner = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.in_ptr))
        return owner * np.int64(self.m) + self.in_eid

    # -- window helpers -------------------------------------------------

    def id_window(self, lo: int, hi: int) -> tuple[int, int]:
        """Half-open id range ``[a, b)`` of edges with ``lo <= t <= hi``."""
        return (int(np.searchsorted(self.t, lo, side="left")),
                int(np.searchsorted(self.t, hi, side="right")))

    def _pair_range(self, u: int, v: int) -> tuple[int, int]:
        if not (0 <= u < self.n and 0 <= v < self.n):
            return 0, 0
        key = u * self.n + v
        k = int(np.searchsorted(self.pair_keys, key))
        if k == self.pair_keys.size or self.pair_keys[k] != key:
            return 0, 0
        return int(self.pair_ptr[k]), int(self.pair_ptr[k + 1])


def _slice(ids: np.ndarray, a: int, b: int) -> np.ndarray:
    return ids[np.searchsorted(ids, a, side="left"):np.searchsorted(ids, b, side="left")]


def _adj_slice(g: TemporalGraph, v: int, lo: int, hi: int, out: bool) -> np.ndarray:
    if lo > hi:
        raise ValueError("empty interval: lo > hi")
    if not 0 <= v < g.n:
        return np.zeros(0, dtype=np.int64)
    ptr, eid = (g.out_ptr, g.out_eid) if out else (g.in_ptr, g.in_eid)
    a, b = g.id_window(lo, hi)
    return _slice(eid[ptr[v]:ptr[v + 1]], a, b)


def temporal_out_slice(g: TemporalGraph, v: int, lo: int, hi: int) -> np.ndarray:
    """Out-edges of ``v`` with ``lo <= t <= hi`` as rows ``(dst, t, id)``."""
    ids = _adj_slice(g, v, lo, hi, out=True)
    return np.column_stack((g.dst[ids], g.t[ids], ids))


def temporal_in_slice(g: TemporalGraph, v: int, lo: int, hi: int) -> np.ndarray:
    """In-edges of ``v`` with ``lo <= t <= hi`` as rows ``(src, t, id)``."""
    ids = _adj_slice(g, v, lo, hi, out=False)
    return np.column_stack((g.src[ids], g.t[ids], ids))


def temporal_out_degree(g: TemporalGraph, v: int, lo: int, hi: int) -> int:
    return int(_adj_slice(g, v, lo, hi, out=True).size)


def temporal_in_degree(g: TemporalGraph, v: int, lo: int, hi: int) -> int:
    return int(_adj_slice(g, v, lo, hi, out=False).size)


def multiplicity(g: TemporalGraph, u: int, v: int, lo: int, hi: int) -> int:
    """Number of parallel ``(u, v)`` edges with ``lo <= t <= hi``."""
    if lo > hi:
        raise ValueError("empty interval: lo > hi")
    s, e = g._pair_range(u, v)
    a, b = g.id_window(lo, hi)
    return int(_slice(g.pair_eid[s:e], a, b).size)


def pair_slice(g: TemporalGraph, u: int, v: int, lo_exclusive: int, hi: int,
               hi_inclusive: bool = True) -> np.ndarray:
    """Timestamps of ``(u, v)`` edges in ``(lo_exclusive, hi]`` (or ``(lo, hi)``)."""
    if lo_exclusive > hi:
        raise ValueError("empty interval: lo > hi")
    s, e = g._pair_range(u, v)
    a = int(np.searchsorted(g.t, lo_exclusive, side="right"))
    b = int(np.searchsorted(g.t, hi, side="right" if hi_inclusive else "left"))
    return g.t[_slice(g.pair_eid[s:e], a, b)]


def max_multiplicity(g: TemporalGraph, delta: int) -> int:
    """``max`` over pairs and start times of the multiplicity in a ``delta`` window."""
    if g.m == 0:
        return 0
    order = g.pair_eid
    owner = np.repeat(np.arange(g.pair_keys.size, dtype=np.int64), np.diff(g.pair_ptr))
    keys = owner * np.int64(g.m) + order
    hi = np.searchsorted(g.t, g.t[order] + delta, side="right")
    counts = np.searchsorted(keys, owner * np.int64(g.m) + hi) - np.arange(g.m)
    return int(counts.max())


# -- loading -------------------------------------------------------------


def load_graph(path: str | Path, format: str = "whitespace",
               keep_self_loops: bool = False) -> TemporalGraph:
    """Read a ``src dst timestamp`` edge list.

    Raw vertex labels are remapped to dense ids in first-appearance order; the
    mapping is kept on ``TemporalGraph.labels``.  Self-loops are skipped (and
    counted in the log) unless ``keep_self_loops`` is set.
    """
    try:
        split = _SPLITTERS[format]
    except KeyError:
        raise ValueError(f"unknown format {format!r}; expected one of {sorted(_SPLITTERS)}")

    ids: dict[int, int] = {}
    src: list[int] = []
    dst: list[int] = []
    ts: list[int] = []
    loops = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith(_COMMENT_PREFIXES):
                continue
            fields = split.split(line)
            if len(fields) < 3:
                raise GraphFormatError(f"expected 'src dst timestamp', got {line!r}", lineno)
            try:
                u, v, t = int(fields[0]), int(fields[1]), int(fields[2])
            except ValueError:
                raise GraphFormatError(f"non-integer field in {line!r}", lineno) from None
            if t < 0:
                raise GraphFormatError(f"negative timestamp {t}", lineno)
            if u == v and not keep_self_loops:
                loops += 1
                continue
            src.append(ids.setdefault(u, len(ids)))
            dst.append(ids.setdefault(v, len(ids)))
            ts.append(t)
    if loops:
        log.warning("skipped %d self-loop edge(s) in %s", loops, path)
    if not ts:
        raise GraphFormatError(f"no edges in {path}")
    labels = np.fromiter(ids.keys(), dtype=np.int64, count=len(ids))
    return TemporalGraph.from_arrays(src, dst, ts, n=len(ids), labels=labels,
                                     keep_self_loops=keep_self_loops)
