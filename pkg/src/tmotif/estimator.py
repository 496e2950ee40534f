"""Path-sampling estimator for temporal motif counts."""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels
from .extend import anchor_code, check_motif, count_paths, resolve_overflow
from .graph import TemporalGraph, max_multiplicity
from .motif import Anchor, ExtensionPlan, Motif, build_extension_plan, choose_anchor
from .sampler import (MAX_DELTA, SampledPath, WeightTable, arm_codes, enumerate_paths,
                      preprocess, sample_path)

log = logging.getLogger(__name__)

CHUNK = 1 << 14


@dataclass
class EstimateReport:
    estimate: float
    W: int
    k: int
    hits: int
    sum_X: int
    sum_X2: int
    B_max: int
    B_avg: float
    B_std: float
    seed: int
    threads: int
    elapsed_preprocess: float = 0.0
    elapsed_sampling: float = 0.0
    anchor: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Prepared:
    """Everything about a (graph, motif, delta) query that does not depend on the seed."""

    motif: Motif
    anchor: Anchor
    plan: ExtensionPlan
    table: WeightTable
    code: np.ndarray
    delta: int
    strict: bool
    elapsed: float


def prepare(g: TemporalGraph, m: Motif, delta: int, strict: bool = True) -> Prepared:
    if delta < 0:
        raise ValueError("delta must be non-negative")
    anchor = choose_anchor(m)
    plan = build_extension_plan(m, anchor)
    start = time.perf_counter()
    table = preprocess(g, anchor.cls, delta)
    elapsed = time.perf_counter() - start
    return Prepared(m, anchor, plan, table, anchor_code(m, anchor, plan),
                    min(int(delta), MAX_DELTA), strict, elapsed)


def _exact_sum(x: np.ndarray) -> int:
    if x.dtype == object:
        return int(sum(x))
    # split into 32-bit halves so neither partial sum can wrap
    lo = (x & 0xFFFFFFFF).sum(dtype=np.uint64)
    hi = (x >> 32).sum(dtype=np.uint64)
    return (int(hi) << 32) + int(lo)


def b_statistics(samples) -> tuple[int, float, float]:
    """``(max, mean, population std)`` of per-sample extension counts."""
    x = np.asarray(samples)
    if x.size == 0:
        raise ValueError("no samples")
    xf = x.astype(np.float64)
    return int(x.max()), float(xf.mean()), float(xf.std())


def draw_counts(g: TemporalGraph, prep: Prepared, k: int, seed: int,
                threads: int = 1) -> np.ndarray:
    """Extension counts ``X_0 .. X_{k-1}``; ``X_i`` depends only on ``(seed, i)``."""
    wt = prep.table
    if wt.W == 0:
        return np.zeros(k, dtype=np.int64)
    if not wt.exact_int64:
        return _draw_counts_python(g, prep, k, seed)

    arms = arm_codes(wt.cls)

    def run(span):
        start, count = span
        return _kernels.sample_check_batch(
            seed, start, count, wt.prefix, wt.W, g.src, g.dst, g.t, g.out_ptr, g.out_eid,
            g.in_ptr, g.in_eid, g.pair_keys, g.pair_ptr, g.pair_eid, g.n, arms, prep.code,
            prep.delta, prep.strict)

    spans = [(s, min(CHUNK, k - s)) for s in range(0, k, CHUNK)]
    if threads <= 1 or len(spans) == 1:
        parts = [run(s) for s in spans]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, spans))
    x = np.concatenate(parts)
    bad = np.flatnonzero(x == _kernels.OVERFLOW)
    if bad.size:
        rows = np.concatenate([_kernels.sample_batch(seed, int(i), 1, wt.prefix, wt.W, g.src,
                                                     g.dst, g.t, g.out_ptr, g.out_eid,
                                                     g.in_ptr, g.in_eid, arms, prep.delta)
                               for i in bad])
        fixed = resolve_overflow(np.full(bad.size, _kernels.OVERFLOW), rows, prep.motif,
                                 prep.anchor, prep.plan, g, prep.delta, prep.strict)
        x = x.astype(object)
        x[bad] = fixed
    return x


def _draw_counts_python(g, prep, k, seed):
    # prefix sums beyond int64: sample with Python ints, one generator per sample index
    out = np.empty(k, dtype=object)
    for i in range(k):
        rng = np.random.default_rng([seed, i])
        p = sample_path(prep.table, g, rng)
        out[i] = check_motif(p, prep.motif, prep.anchor, prep.plan, g, prep.delta, prep.strict)
    return out


def estimate(g: TemporalGraph, m: Motif, delta: int, k: int, seed: int = 0,
             threads: int = 1, strict: bool = True,
             prepared: Prepared | None = None) -> EstimateReport:
    """Unbiased estimate of the number of ``m``-matches within ``delta``.

    ``k`` class paths are drawn uniformly; the estimate is ``(sum X_i / k) * W``
    where ``X_i`` is the number of matches anchored on path ``i``.  The result
    is identical for any ``threads`` value.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    prep = prepared or prepare(g, m, delta, strict)
    start = time.perf_counter()
    x = draw_counts(g, prep, k, seed, threads)
    elapsed = time.perf_counter() - start

    W = prep.table.W
    sum_x = _exact_sum(x)
    nz = x[x != 0]
    sum_x2 = sum(int(v) * int(v) for v in nz)
    b_max, b_avg, b_std = b_statistics(x)
    notes = [] if W else ["zero-support: no delta-centered paths of the anchor class"]
    return EstimateReport(
        estimate=sum_x * W / k if W else 0.0,
        W=W, k=k, hits=int(nz.size), sum_X=sum_x, sum_X2=sum_x2,
        B_max=b_max, B_avg=b_avg, B_std=b_std, seed=seed, threads=threads,
        elapsed_preprocess=prep.elapsed, elapsed_sampling=elapsed,
        anchor=prep.anchor.describe(), notes=notes,
    )


def exhaustive_estimate(g: TemporalGraph, m: Motif, delta: int, strict: bool = True,
                        cap: int = 10 ** 7) -> int:
    """Sum of extension counts over every anchor-class path; equals the exact count."""
    anchor = choose_anchor(m)
    plan = build_extension_plan(m, anchor)
    paths = enumerate_paths(g, anchor.cls, delta, cap)
    if paths.shape[0] == 0:
        return 0
    return _exact_sum(count_paths(paths, m, anchor, plan, g, delta, strict))


def required_samples(W: int, C_guess: float, sigma_delta: int, r: int, eps: float,
                     gamma: float) -> int:
    """Samples sufficient for ``Pr[|C_hat - C| > eps C] < gamma`` (Chernoff bound)."""
    if C_guess <= 0:
        raise ValueError("C_guess must be positive")
    if not (0 < eps < 1 and 0 < gamma < 1):
        raise ValueError("eps and gamma must lie in (0, 1)")
    if W <= 0 or sigma_delta <= 0 or r < 0:
        raise ValueError("W and sigma_delta must be positive, r non-negative")
    bound = 3 * float(sigma_delta) ** r * W * math.log(2 / gamma) / (C_guess * eps * eps)
    return max(1, math.ceil(bound))


def auto_samples(g: TemporalGraph, m: Motif, delta: int, eps: float = 0.1,
                 gamma: float = 0.05, pilot_k: int = 10_000, seed: int = 0,
                 threads: int = 1, strict: bool = True, max_samples: int = 10 ** 9,
                 prepared: Prepared | None = None) -> tuple[int, dict]:
    """Pilot run, then the sample count the error bound asks for at the pilot estimate."""
    prep = prepared or prepare(g, m, delta, strict)
    pilot_seed = (seed * 0x9E3779B1 + 0x5EED) % (1 << 63)
    pilot = estimate(g, m, delta, pilot_k, seed=pilot_seed, threads=threads, prepared=prep)
    sigma = max_multiplicity(g, delta)
    r = m.num_edges - (m.nv - 1)
    info = {"pilot_k": pilot_k, "pilot_estimate": pilot.estimate, "sigma_delta": sigma, "r": r}
    if pilot.estimate <= 0:
        raise ValueError("pilot run found no matches; give an explicit sample count")
    k = required_samples(prep.table.W, pilot.estimate, sigma, r, eps, gamma)
    if k > max_samples:
        log.warning("error bound asks for %d samples; capping at %d", k, max_samples)
        info["uncapped_k"] = k
        k = max_samples
    return k, info


def relative_error(exact: int, approx: float) -> float:
    if exact == 0:
        return 0.0 if approx == 0 else math.inf
    return abs(exact - approx) / exact
