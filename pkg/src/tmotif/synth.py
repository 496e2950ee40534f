"""Synthetic temporal graphs for tests and benchmarks."""

from __future__ import annotations

import numpy as np

from .graph import TemporalGraph


def _zipf_weights(n: int, skew: float) -> np.ndarray:
    w = (np.arange(1, n + 1, dtype=np.float64)) ** -skew
    return w / w.sum()


def _distinct_pairs(rng, n, m, p):
    src = rng.choice(n, size=m, p=p)
    dst = rng.choice(n, size=m, p=p)
    clash = src == dst
    while clash.any():
        dst[clash] = rng.choice(n, size=int(clash.sum()), p=p)
        clash = src == dst
    return src, dst


def random_graph(n: int, m: int, t_max: int, seed: int = 0, skew: float = 0.8,
                 tie_fraction: float = 0.2) -> TemporalGraph:
    """Zipf-weighted endpoints, uniform timestamps, some timestamps duplicated."""
    rng = np.random.default_rng(seed)
    src, dst = _distinct_pairs(rng, n, m, _zipf_weights(n, skew))
    t = rng.integers(0, t_max + 1, size=m)
    ties = rng.random(m) < tie_fraction
    t[ties] = t[rng.integers(0, m, size=int(ties.sum()))]
    return TemporalGraph.from_arrays(src, dst, t, n=n)


def blocked_graph(m: int, delta: int, block_edges: int = 100, pool: int = 24,
                  n: int = 200_000, skew: float = 1.1, seed: int = 0) -> TemporalGraph:
    """Skewed graph whose delta-neighbourhoods stay small.

    Edges come in blocks of ``block_edges``.  Each block lives in its own time
    slot of width ``2 * delta`` separated by gaps wider than ``delta``, so no
    match spans two blocks.  A block draws ``pool`` vertices from a global
    Zipf law over ``n`` vertices and its edge endpoints from a second Zipf law
    over that pool, so both global and local degrees are heavy tailed.
    """
    rng = np.random.default_rng(seed)
    blocks = -(-m // block_edges)
    # pool members drawn with replacement; a repeated member merges two local vertices
    members = rng.choice(n, size=(blocks, pool), p=_zipf_weights(n, skew))
    block = np.repeat(np.arange(blocks, dtype=np.int64), block_edges)[:m]
    lp = _zipf_weights(pool, skew)
    ls, ld = _distinct_pairs(rng, pool, m, lp)
    src = members[block, ls]
    dst = members[block, ld]
    clash = np.flatnonzero(src == dst)
    while clash.size:
        dst[clash] = members[block[clash], rng.choice(pool, size=clash.size, p=lp)]
        clash = clash[src[clash] == dst[clash]]
    t = block * (4 * delta) + rng.integers(0, 2 * delta, size=m)
    return TemporalGraph.from_arrays(src, dst, t, n=n)


def uniform_graph(n: int, m: int, t_max: int, seed: int = 0) -> TemporalGraph:
    """Uniform endpoints and timestamps; cheap to build at 10^7 edges."""
    rng = np.random.default_rng(seed)
    src = rng.integers(0, n, size=m)
    dst = (src + rng.integers(1, n, size=m)) % n
    t = rng.integers(0, t_max + 1, size=m)
    return TemporalGraph.from_arrays(src, dst, t, n=n)


def planted_graph(motif, copies: int, noise: int, n: int = 6, t_max: int = 60,
                  span: int = 20, seed: int = 0) -> TemporalGraph:
    """Random copies of ``motif`` plus noise edges, all timestamps in ``[0, t_max]``.

    Each copy gets distinct times inside a window of width ``span``; ties
    arise between copies and with the noise.

    Dense enough in matches to exercise long patterns on graphs small enough
    for brute-force checking.
    """
    rng = np.random.default_rng(seed)
    src, dst, t = [], [], []
    for _ in range(copies):
        phi = rng.choice(n, size=motif.nv, replace=False)
        base = rng.integers(0, max(t_max - span, 0) + 1)
        times = base + np.sort(rng.choice(max(span + 1, motif.num_edges), motif.num_edges,
                                          replace=False))
        for (a, b), ts in zip(motif.edges, times):
            src.append(phi[a])
            dst.append(phi[b])
            t.append(ts)
    if noise:
        s, d = _distinct_pairs(rng, n, noise, np.full(n, 1 / n))
        src.extend(s)
        dst.extend(d)
        t.extend(rng.integers(0, t_max + 1, size=noise))
    order = rng.permutation(len(t))
    return TemporalGraph.from_arrays(np.asarray(src)[order], np.asarray(dst)[order],
                                     np.asarray(t)[order], n=n)
