import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PATH3
from oracles import brute_list_count, matches_by_anchor
from tmotif import (PRESETS, Motif, build_extension_plan, candidate_lists, check_motif,
                    choose_anchor, enumerate_paths, list_count, max_multiplicity)
from tmotif import _kernels
from tmotif.extend import count_paths
from tmotif.sampler import SampledPath
from tmotif.synth import planted_graph, random_graph

sorted_lists = st.lists(st.lists(st.integers(0, 20), max_size=8).map(sorted), max_size=5)


def _setup(m):
    a = choose_anchor(m)
    return a, build_extension_plan(m, a)


@pytest.mark.parametrize("lists,strict,expected", [
    ([[1, 3], [2, 4]], True, 3),
    ([[2], [2]], True, 0),
    ([[2], [2]], False, 1),
    ([[5, 6, 7]], True, 3),
    ([], True, 1),
    ([[1, 2], []], True, 0),
    ([[1, 1, 2], [1, 2, 2], [2, 3]], True, 4),
])
def test_list_count_examples(lists, strict, expected):
    assert brute_list_count(lists, strict) == expected
    assert list_count(lists, strict) == expected


@settings(max_examples=300, deadline=None)
@given(sorted_lists, st.booleans())
def test_list_count_matches_brute_force(lists, strict):
    assert list_count(lists, strict) == brute_list_count(lists, strict)
    flat = np.array([x for lst in lists for x in lst], dtype=np.int64)
    offs = np.cumsum([0] + [len(lst) for lst in lists]).astype(np.int64)
    assert _kernels.list_count_flat(flat, offs, strict) == brute_list_count(lists, strict)


def test_g1_bare_path(g1):
    a, plan = _setup(PATH3)
    assert plan.r == 0
    p = SampledPath(1, (0, 2))
    assert check_motif(p, PATH3, a, plan, g1, 25) == 1
    assert check_motif(p, PATH3, a, plan, g1, 15) == 0
    assert candidate_lists(p, PATH3, a, plan, g1, 15) is None


def test_near_miss_candidates(near_miss):
    m = PRESETS["M4-0"]
    a, plan = _setup(m)
    # ids: 0 (0,1,10) 1 (1,2,20) 2 (2,3,40) 3 (3,2,50) 4 (3,0,60) 5 (1,2,80) 6 (3,0,200)
    valid = SampledPath(1, (0, 2))
    assert check_motif(valid, m, a, plan, near_miss, 100) == 1
    cl = candidate_lists(valid, m, a, plan, near_miss, 100)
    # (3,0,200) lies past t0 + delta = 110 and never becomes a candidate
    assert cl.lists == ((60,),) and cl.pairs == ((3, 0),)
    # wrong direction: (3,2,50) enters 2 instead of leaving it
    assert check_motif(SampledPath(1, (0, 3)), m, a, plan, near_miss, 100) == 0
    # wrong order: (1,2,80) as the middle edge comes after (2,3,40)
    assert check_motif(SampledPath(5, (0, 2)), m, a, plan, near_miss, 100) == 0
    assert check_motif(valid, m, a, plan, near_miss, 49) == 0


def test_repeated_vertices_rejected():
    g = random_graph(3, 40, 50, seed=0)
    a, plan = _setup(PATH3)
    # only 3 vertices: every 3-path repeats one
    for row in enumerate_paths(g, a.cls, 50).tolist():
        p = SampledPath.from_row(row, 2)
        assert check_motif(p, PATH3, a, plan, g, 50) == 0
        assert candidate_lists(p, PATH3, a, plan, g, 50) is None


@pytest.mark.parametrize("strict", [True, False])
@pytest.mark.parametrize("name", sorted(PRESETS))
def test_per_path_counts_match_oracle(name, strict):
    m = PRESETS[name]
    a, plan = _setup(m)
    pos = sorted(a.positions)
    for seed in range(3):
        # planted copies keep long motifs non-trivial on graphs the naive oracle can walk
        L = m.num_edges
        g = planted_graph(m, 2 if L < 6 else 1, 12 if L < 6 else 20 - L, n=5, t_max=40,
                          seed=100 + seed)
        delta = 30
        expected = matches_by_anchor(g, m, a, delta, strict)
        paths = enumerate_paths(g, a.cls, delta)
        got = count_paths(paths, m, a, plan, g, delta, strict)
        seen = {}
        for row, x in zip(paths.tolist(), got.tolist()):
            p = SampledPath.from_row(row, len(a.arms))
            image = {a.center_position: p.center,
                     **{arm.position: e for arm, e in zip(a.arms, p.arms)}}
            key = tuple(image[q] for q in pos)
            assert x == expected.get(key, 0), (row, key)
            cl = candidate_lists(p, m, a, plan, g, delta, strict)
            assert x == (0 if cl is None else list_count(cl))
            seen[key] = x
        assert {k: v for k, v in seen.items() if v} == dict(expected)
        assert expected


def test_count_bounded_by_sigma_power():
    m = PRESETS["M4-2"]
    a, plan = _setup(m)
    g = random_graph(5, 80, 40, seed=7)
    for delta in (10, 40):
        bound = max_multiplicity(g, delta) ** plan.r
        x = count_paths(enumerate_paths(g, a.cls, delta), m, a, plan, g, delta)
        assert x.size and x.max() <= bound


def test_monotone_in_delta():
    m = PRESETS["M4-4"]
    a, plan = _setup(m)
    g = random_graph(6, 60, 60, seed=12)
    paths = enumerate_paths(g, a.cls, 20)
    prev = count_paths(paths, m, a, plan, g, 20)
    for delta in (25, 35, 60):
        cur = count_paths(paths, m, a, plan, g, delta)
        assert np.all(cur >= prev)
        prev = cur


def test_overflow_falls_back_to_big_ints():
    # 2000 parallel (1,2) edges after a 0-1-2 wedge, pattern with 7 repeats of (1,2)
    m = Motif(3, ((0, 1), (1, 2)) + ((1, 2),) * 7)
    a, plan = _setup(m)
    edges = [(0, 1, 0), (1, 2, 1)] + [(1, 2, 2 + i) for i in range(2000)]
    from tmotif import TemporalGraph
    g = TemporalGraph.from_edges(edges)
    p = SampledPath(0, (1,))
    x = check_motif(p, m, a, plan, g, 10 ** 6)
    assert x == list_count(candidate_lists(p, m, a, plan, g, 10 ** 6))
    # C(2000, 7) does not fit in int64
    from math import comb
    assert x == comb(2000, 7) and x > 2 ** 63
    assert count_paths(np.array([[0, 1, -1]]), m, a, plan, g, 10 ** 6)[0] == x
