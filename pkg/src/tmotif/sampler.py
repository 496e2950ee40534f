"""Weighted center-edge distribution and uniform delta-centered path sampling.

For a center edge ``e = (u, v, t)`` every arm of the class picks one edge from
a temporal in- or out-list of ``u`` or ``v`` over ``[t - delta, t]`` (arm
before the center) or ``[t, t + delta]`` (arm after).  The number of class
paths centered at ``e`` is the product of those list lengths, so drawing ``e``
with probability ``w[e] / W`` and each arm uniformly from its list yields a
uniform path.  Both window ends are inclusive; ties with the center are left
in and filtered by the order checks downstream.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .graph import TemporalGraph
from .motif import Arm, PathClass, WedgeClass

# prefix sums at or above this switch from int64 to Python ints
INT64_SAFE = 2 ** 62
MAX_DELTA = 2 ** 61


class NoPathError(ValueError):
    """The weight table is empty (``W == 0``): there is nothing to sample."""


class EnumerationCapExceeded(RuntimeError):
    pass


class SampledPath(NamedTuple):
    center: int
    arms: tuple[int, ...]

    @property
    def e1(self) -> int:
        return self.arms[0] if len(self.arms) == 2 else self.center

    @property
    def e2(self) -> int:
        return self.center if len(self.arms) == 2 else self.arms[0]

    @property
    def e3(self) -> int | None:
        return self.arms[1] if len(self.arms) == 2 else None

    @property
    def kind(self) -> str:
        return "path3" if len(self.arms) == 2 else "wedge"

    def row(self) -> tuple[int, int, int]:
        arms = tuple(self.arms) + (-1,) * (2 - len(self.arms))
        return (self.center, *arms)

    @classmethod
    def from_row(cls, row, n_arms: int) -> "SampledPath":
        return cls(int(row[0]), tuple(int(x) for x in row[1:1 + n_arms]))


@dataclass(frozen=True, eq=False)
class WeightTable:
    delta: int
    cls: PathClass | WedgeClass
    w: np.ndarray
    prefix: np.ndarray
    W: int

    @property
    def exact_int64(self) -> bool:
        return self.prefix.dtype == np.int64

    @property
    def p(self) -> np.ndarray:
        if self.W == 0:
            return np.zeros_like(self.w, dtype=np.float64)
        return self.w / float(self.W)


def arm_codes(cls: PathClass | WedgeClass) -> np.ndarray:
    return np.array([[a.end == "dst", a.direction == "out", a.side == "after"] for a in cls.arms],
                    dtype=np.int64)


def _arm_windows(g: TemporalGraph, arm: Arm, delta: int,
                 centers: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Positions ``[s0, s1)`` into ``out_eid``/``in_eid`` of each center's arm list."""
    if centers is None:
        centers = np.arange(g.m, dtype=np.int64)
    tc = g.t[centers]
    if arm.side == "before":
        lo = np.searchsorted(g.t, tc - delta, side="left")
        hi = np.searchsorted(g.t, tc, side="right")
    else:
        lo = np.searchsorted(g.t, tc, side="left")
        hi = np.searchsorted(g.t, tc + delta, side="right")
    vert = (g.src if arm.end == "src" else g.dst)[centers]
    keys = g.out_keys if arm.direction == "out" else g.in_keys
    base = vert * np.int64(g.m)
    return np.searchsorted(keys, base + lo), np.searchsorted(keys, base + hi)


def _arm_ids(g: TemporalGraph, arm: Arm) -> np.ndarray:
    return g.out_eid if arm.direction == "out" else g.in_eid


def preprocess(g: TemporalGraph, cls: PathClass | WedgeClass, delta: int) -> WeightTable:
    """Per-edge class path counts ``w`` (degree products), prefix sums and total ``W``."""
    if delta < 0:
        raise ValueError("delta must be non-negative")
    delta = min(int(delta), MAX_DELTA)
    w = _kernels.arm_weights(g.src, g.dst, g.t, g.out_ptr, g.out_eid, g.in_ptr, g.in_eid,
                             arm_codes(cls), delta)
    if float(w.sum(dtype=np.float64)) < INT64_SAFE:
        prefix = np.cumsum(w)
    else:
        prefix = np.cumsum(w.astype(object))
    W = int(prefix[-1]) if g.m else 0
    w.flags.writeable = False
    return WeightTable(delta, cls, w, prefix, W)


def _draw_below(rng: np.random.Generator, n: int) -> int:
    if n < 2 ** 63:
        return int(rng.integers(n))
    nbytes = (n.bit_length() + 7) // 8
    while True:
        x = int.from_bytes(rng.bytes(nbytes), "little") >> (8 * nbytes - n.bit_length())
        if x < n:
            return x


def sample_path(wt: WeightTable, g: TemporalGraph, rng: np.random.Generator) -> SampledPath:
    """One uniform class path; raises :class:`NoPathError` when ``W == 0``."""
    if wt.W == 0:
        raise NoPathError("no delta-centered paths of this class")
    r = _draw_below(rng, wt.W)
    if wt.exact_int64:
        c = int(np.searchsorted(wt.prefix, r, side="right"))
    else:
        c = bisect.bisect_right(wt.prefix, r)
    centers = np.array([c], dtype=np.int64)
    arms = []
    for arm in wt.cls.arms:
        s0, s1 = _arm_windows(g, arm, wt.delta, centers)
        s0, s1 = int(s0[0]), int(s1[0])
        arms.append(int(_arm_ids(g, arm)[s0 + int(rng.integers(s1 - s0))]))
    return SampledPath(c, tuple(arms))


def sample_wedge(wt: WeightTable, g: TemporalGraph, rng: np.random.Generator) -> SampledPath:
    if not isinstance(wt.cls, WedgeClass):
        raise TypeError("weight table was not built for a wedge class")
    return sample_path(wt, g, rng)


def sample_many(wt: WeightTable, g: TemporalGraph, seed: int, count: int,
                start: int = 0) -> np.ndarray:
    """Rows ``(center, arm0, arm1)`` for sample indices ``start .. start+count-1``.

    Each row depends only on ``(seed, index)``.  Unused arm columns are ``-1``.
    """
    if wt.W == 0:
        raise NoPathError("no delta-centered paths of this class")
    if not wt.exact_int64:
        raise OverflowError("compiled sampler needs W < 2**62; use sample_path")
    return _kernels.sample_batch(seed, start, count, wt.prefix, wt.W, g.src, g.dst, g.t,
                                 g.out_ptr, g.out_eid, g.in_ptr, g.in_eid,
                                 arm_codes(wt.cls), wt.delta)


def enumerate_paths(g: TemporalGraph, cls: PathClass | WedgeClass, delta: int,
                    cap: int = 10 ** 7) -> np.ndarray:
    """Every class path as a row ``(center, arm0, arm1)``, ordered by center edge."""
    delta = min(int(delta), MAX_DELTA)
    arms = cls.arms
    windows = [_arm_windows(g, arm, delta) for arm in arms]
    counts = [s1 - s0 for s0, s1 in windows]
    w = np.ones(g.m, dtype=np.int64)
    for c in counts:
        w *= c
    if float(w.sum(dtype=np.float64)) > cap:
        raise EnumerationCapExceeded(f"{int(sum(map(int, w)))} paths exceed enumeration cap {cap}")
    total = int(w.sum())
    out = np.full((total, 3), -1, dtype=np.int64)
    if total == 0:
        return out
    out[:, 0] = np.repeat(np.arange(g.m, dtype=np.int64), w)
    offset = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(w) - w, w)
    inner = np.repeat(counts[1], w) if len(arms) == 2 else np.ones(total, dtype=np.int64)
    idx = (offset // inner, offset % inner)
    for k, arm in enumerate(arms):
        s0 = np.repeat(windows[k][0], w)
        out[:, 1 + k] = _arm_ids(g, arm)[s0 + idx[k]]
    return out
