"""Count the motif matches that extend a sampled anchor path.

A sampled path fixes the images of all pattern vertices.  Each remaining
pattern edge can then only map to parallel graph edges between two known
vertices, restricted to the open interval between its neighbouring anchor
edges (in time order) and to ``t0 + delta``, where ``t0`` is the time of the
anchor's earliest edge.  Counting the increasing one-per-list tuples over
those candidate lists gives the number of matches; no tuple is enumerated.

In strict mode (default) matched timestamps must increase strictly along the
motif's time order.  In lenient mode ties are allowed and resolved by edge id,
i.e. by input order, so each edge set is still counted once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import TemporalGraph
from .motif import Anchor, ExtensionPlan, Motif
from .sampler import MAX_DELTA, SampledPath


@dataclass(frozen=True)
class CandidateLists:
    """Candidate keys per non-anchor edge, in time order.

    Keys are timestamps in strict mode and edge ids in lenient mode; in both
    cases a match picks a strictly increasing key tuple, so count with
    ``list_count(lists, strict=True)``.
    """

    lists: tuple[tuple[int, ...], ...]
    pairs: tuple[tuple[int, int], ...]
    bounds: tuple[tuple[int, int], ...]


def anchor_code(m: Motif, a: Anchor, plan: ExtensionPlan) -> np.ndarray:
    """Flatten anchor and plan into the kernel's int64 layout."""
    code = np.full(17 + 4 * max(plan.r, 1), -1, dtype=np.int64)
    code[0:6] = (m.nv, a.center[0], a.center[1], len(a.arms), len(a.arms) + 1, plan.r)
    slot = {a.center_position: 0}
    for k, arm in enumerate(a.arms):
        direction = a.cls.arms[k].direction
        side = a.cls.arms[k].side
        code[6 + 4 * k:10 + 4 * k] = (arm.end == "dst", direction == "out",
                                      side == "after", arm.far_vertex)
        slot[arm.position] = 1 + k
    for i, p in enumerate(sorted(slot)):
        code[14 + i] = slot[p]
    for s, step in enumerate(plan.steps):
        above = -1 if step.above is None else slot[step.above]
        code[17 + 4 * s:21 + 4 * s] = (step.src, step.dst, slot[step.below], above)
    return code


def list_count(lists, strict: bool = True) -> int:
    """Number of tuples ``(x_1, ..., x_l)``, ``x_i`` from list ``i``, increasing in ``i``.

    Lists must be sorted ascending.  ``strict=False`` counts non-decreasing
    tuples instead.  One merged sweep per adjacent pair of lists.
    """
    if isinstance(lists, CandidateLists):
        lists = lists.lists
    if not lists:
        return 1
    prev = [1] * len(lists[0])
    for a, b in zip(lists, lists[1:]):
        cur = []
        j = acc = 0
        for x in b:
            while j < len(a) and (a[j] < x if strict else a[j] <= x):
                acc += prev[j]
                j += 1
            cur.append(acc)
        prev = cur
    return sum(prev)


def _phi(path: SampledPath, m: Motif, a: Anchor, g: TemporalGraph) -> list[int] | None:
    phi = [-1] * m.nv
    c = path.center
    u, v = int(g.src[c]), int(g.dst[c])
    phi[a.center[0]], phi[a.center[1]] = u, v
    for arm, rule, e in zip(a.arms, a.cls.arms, path.arms):
        shared = u if arm.end == "src" else v
        es, ed = int(g.src[e]), int(g.dst[e])
        if rule.direction == "in":
            if ed != shared:
                return None
            phi[arm.far_vertex] = es
        else:
            if es != shared:
                return None
            phi[arm.far_vertex] = ed
    return phi if len(set(phi)) == m.nv else None


def candidate_lists(path: SampledPath, m: Motif, a: Anchor, plan: ExtensionPlan,
                    g: TemporalGraph, delta: int, strict: bool = True) -> CandidateLists | None:
    """Candidate lists for ``path``; ``None`` when the path is not a valid anchor image."""
    phi = _phi(path, m, a, g)
    if phi is None:
        return None
    image = {a.center_position: path.center}
    image.update({arm.position: e for arm, e in zip(a.arms, path.arms)})
    ordered = [image[p] for p in sorted(image)]
    key = (lambda e: int(g.t[e])) if strict else int
    if any(key(x) >= key(y) for x, y in zip(ordered, ordered[1:])):
        return None
    t0 = int(g.t[ordered[0]])
    if int(g.t[ordered[-1]]) - t0 > delta:
        return None

    last = int(np.searchsorted(g.t, t0 + delta, side="right"))
    lists, pairs, bounds = [], [], []
    for step in plan.steps:
        below = image[step.below]
        lo = int(np.searchsorted(g.t, g.t[below], side="right")) if strict else below + 1
        hi = last
        if step.above is not None:
            above = image[step.above]
            hi = min(hi, int(np.searchsorted(g.t, g.t[above], side="left")) if strict else above)
        u, v = phi[step.src], phi[step.dst]
        s, e = g._pair_range(u, v)
        ids = g.pair_eid[s:e]
        ids = ids[(ids >= lo) & (ids < hi)]
        lists.append(tuple(int(x) for x in (g.t[ids] if strict else ids)))
        pairs.append((u, v))
        bounds.append((lo, hi))
    return CandidateLists(tuple(lists), tuple(pairs), tuple(bounds))


def check_motif(path: SampledPath, m: Motif, a: Anchor, plan: ExtensionPlan,
                g: TemporalGraph, delta: int, strict: bool = True) -> int:
    """Matches of ``m`` whose anchor edges map exactly onto ``path``; 0 if invalid."""
    code = anchor_code(m, a, plan)
    c, e1, e2 = path.row()
    x = _kernels.check_path(c, e1, e2, g.src, g.dst, g.t, g.pair_keys, g.pair_ptr,
                            g.pair_eid, g.n, code, min(int(delta), MAX_DELTA), strict)
    if x == _kernels.OVERFLOW:
        return list_count(candidate_lists(path, m, a, plan, g, delta, strict))
    return int(x)


def count_paths(paths: np.ndarray, m: Motif, a: Anchor, plan: ExtensionPlan,
                g: TemporalGraph, delta: int, strict: bool = True) -> np.ndarray:
    """Extension counts for every row of ``paths``.

    Returns ``int64`` unless some count exceeds the int64-safe range, in which
    case the result is an object array of Python ints.
    """
    code = anchor_code(m, a, plan)
    x = _kernels.check_batch(np.ascontiguousarray(paths, dtype=np.int64), g.src, g.dst, g.t,
                             g.pair_keys, g.pair_ptr, g.pair_eid, g.n, code,
                             min(int(delta), MAX_DELTA), strict)
    return resolve_overflow(x, paths, m, a, plan, g, delta, strict)


def resolve_overflow(x: np.ndarray, paths, m, a, plan, g, delta, strict) -> np.ndarray:
    bad = np.flatnonzero(x == _kernels.OVERFLOW)
    if bad.size == 0:
        return x
    x = x.astype(object)
    for i in bad:
        p = SampledPath.from_row(paths[i], len(a.arms))
        x[i] = list_count(candidate_lists(p, m, a, plan, g, delta, strict))
    return x
