from collections import Counter

import numpy as np
import pytest
from scipy.stats import chisquare

from oracles import brute_paths
from tmotif import NoPathError, PathClass, TemporalGraph, WedgeClass, enumerate_paths, preprocess
from tmotif.sampler import (EnumerationCapExceeded, SampledPath, sample_many, sample_path,
                            sample_wedge)
from tmotif.synth import random_graph

MAIN = PathClass("in", "out", "before", "after")
ALL_CLASSES = PathClass.all() + WedgeClass.all()


def test_g1_weights(g1):
    wt = preprocess(g1, MAIN, 15)
    assert wt.w.tolist() == [0, 1, 0] and wt.W == 1
    assert wt.prefix.tolist() == [0, 1, 1]
    rng = np.random.default_rng(0)
    for _ in range(20):
        assert sample_path(wt, g1, rng) == SampledPath(1, (0, 2))


def test_g2_weights(g2):
    wt = preprocess(g2, MAIN, 20)
    assert wt.w.tolist() == [0, 0, 4, 0, 0] and wt.W == 4
    assert np.isclose(wt.p.sum(), 1.0)
    assert len(enumerate_paths(g2, MAIN, 20)) == 4


def test_degree_product_example():
    # 2 in-edges of u before, 3 out-edges of v after
    g = TemporalGraph.from_edges([(1, 2, 5), (3, 2, 8), (2, 4, 10), (4, 5, 11), (4, 6, 12),
                                  (4, 7, 15)])
    wt = preprocess(g, MAIN, 6)
    assert wt.w[2] == 6


def test_zero_support(g1):
    wt = preprocess(g1, MAIN, 5)
    assert wt.W == 0
    assert wt.p.tolist() == [0.0, 0.0, 0.0]
    with pytest.raises(NoPathError):
        sample_path(wt, g1, np.random.default_rng(0))
    with pytest.raises(NoPathError):
        sample_many(wt, g1, 0, 10)


def test_negative_delta(g1):
    with pytest.raises(ValueError):
        preprocess(g1, MAIN, -1)


def test_wedge_examples():
    g = TemporalGraph.from_edges([(1, 2, 10), (2, 3, 15)])
    cls = WedgeClass("out", "after", "dst")
    wt = preprocess(g, cls, 10)
    assert wt.w.tolist() == [1, 0] and wt.W == 1
    p = sample_wedge(wt, g, np.random.default_rng(1))
    assert p == SampledPath(0, (1,)) and p.kind == "wedge" and p.e3 is None
    assert preprocess(g, cls, 3).W == 0
    with pytest.raises(TypeError):
        sample_wedge(preprocess(g, MAIN, 10), g, np.random.default_rng(1))


def test_wedge_star_is_uniform():
    g = TemporalGraph.from_edges([(1, 2, 10), (2, 3, 11), (2, 4, 12), (2, 5, 13)])
    wt = preprocess(g, WedgeClass("out", "after", "dst"), 5)
    assert wt.W == 3
    rows = sample_many(wt, g, seed=11, count=30_000)
    counts = Counter(rows[:, 1].tolist())
    assert sorted(counts) == [1, 2, 3]
    assert chisquare(list(counts.values())).pvalue > 1e-3


def test_empty_graph_enumerates_nothing():
    g = TemporalGraph.from_edges([])
    assert enumerate_paths(g, MAIN, 10).shape == (0, 3)
    assert preprocess(g, MAIN, 10).W == 0


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("delta", [0, 7, 40])
def test_enumeration_matches_brute_force(seed, delta):
    g = random_graph(8, 35, 100, seed=seed)
    for cls in ALL_CLASSES:
        got = sorted(map(tuple, enumerate_paths(g, cls, delta).tolist()))
        assert got == sorted(brute_paths(g, cls, delta)), str(cls)
        assert preprocess(g, cls, delta).W == len(got)


def test_w_equals_enumeration_on_200_edges():
    g = random_graph(25, 200, 1000, seed=9)
    for cls in ALL_CLASSES:
        assert preprocess(g, cls, 60).W == len(enumerate_paths(g, cls, 60))


def test_enumeration_cap():
    g = random_graph(5, 200, 10, seed=1)
    with pytest.raises(EnumerationCapExceeded):
        enumerate_paths(g, MAIN, 10, cap=10)


def test_sample_many_is_indexed_by_seed_and_position():
    g = random_graph(20, 150, 300, seed=2)
    wt = preprocess(g, MAIN, 50)
    full = sample_many(wt, g, seed=5, count=100)
    tail = sample_many(wt, g, seed=5, count=40, start=60)
    assert np.array_equal(full[60:], tail)
    assert not np.array_equal(full, sample_many(wt, g, seed=6, count=100))


def _chi2_pvalue(rows, paths):
    index = {p: i for i, p in enumerate(paths)}
    counts = np.zeros(len(paths))
    for r in map(tuple, rows.tolist()):
        counts[index[r]] += 1
    return chisquare(counts).pvalue


def test_g2_sampling_is_uniform(g2):
    wt = preprocess(g2, MAIN, 20)
    paths = [tuple(p) for p in enumerate_paths(g2, MAIN, 20).tolist()]
    assert _chi2_pvalue(sample_many(wt, g2, 3, 20_000), paths) > 1e-3
    # the numpy-generator path sampler draws from the same distribution
    rng = np.random.default_rng(4)
    rows = np.array([sample_path(wt, g2, rng).row() for _ in range(4000)])
    assert _chi2_pvalue(rows, paths) > 1e-3


def test_samples_satisfy_class_definition():
    g = random_graph(15, 120, 200, seed=8)
    for cls in ALL_CLASSES:
        wt = preprocess(g, cls, 30)
        if wt.W == 0:
            continue
        valid = set(map(tuple, enumerate_paths(g, cls, 30).tolist()))
        rows = sample_many(wt, g, 1, 500)
        assert all(tuple(r) in valid for r in rows.tolist()), str(cls)
