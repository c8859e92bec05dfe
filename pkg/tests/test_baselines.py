import numpy as np
import pytest

from delaymin import (GraphError, LongPathConfig, UpgradeState,
                      brute_force_optimal, distance_matrix, epsilon_net_size,
                      greedy_gr, restricted_spd, rs_of_vertex, select_degree,
                      select_high_delay, select_longpath_random,
                      select_path_centrality, select_random, spd)
from helpers import path_graph, random_connected, ring6, star


def test_select_random_basic():
    g = ring6()
    picks = select_random(g, 5, seed=3)
    assert len(set(picks)) == 5
    assert select_random(g, 3, seed=9) == select_random(g, 3, seed=9)
    with pytest.raises(GraphError):
        select_random(g, 6, seed=0)


def test_select_random_mean_rr_below_optimum():
    g = ring6()
    _, best = brute_force_optimal(g, 2)
    base = spd(g)
    rrs = []
    for t in range(10):
        st = UpgradeState.of(6, select_random(g, 2, seed=t))
        rrs.append((base - spd(g, st)) / base)
    assert np.mean(rrs) <= best / base


def test_select_degree():
    assert select_degree(star(4), 1) == (0,)
    assert select_degree(ring6(), 2) == (0, 1)  # all tied, id order
    g = random_connected(np.random.default_rng(1), 60, extra_edges=80)
    picks = select_degree(g, 5)
    deg = np.diff(g.indptr)
    worst_picked = min(deg[list(picks)])
    others = [deg[v] for v in range(60) if v not in picks]
    assert worst_picked >= max(others)


def test_select_high_delay():
    g = path_graph([2, 5, 3])
    assert select_high_delay(g, 1) == (1,)
    assert select_high_delay(ring6(), 2) == (0, 1)
    picks = select_high_delay(g, 2)
    assert 0 not in picks  # k = n-1 leaves out the minimum-delay node


def test_path_centrality_path_graph():
    assert select_path_centrality(path_graph([1, 1, 1]), 1) == (1,)


def test_path_centrality_weighted_oracle():
    g = path_graph([1, 1, 10])
    d = distance_matrix(g)
    scores = []
    for v in range(3):
        covered = sum(1 for s in range(3) for t in range(3)
                      if s != t and v not in (s, t)
                      and d[s, v] + d[v, t] == d[s, t])
        scores.append(g.delays[v] * covered)
    expect = int(np.argmax(scores))
    assert select_path_centrality(g, 1) == (expect,)


def test_iterative_path_centrality_equals_greedy_uniform():
    rng = np.random.default_rng(7)
    for _ in range(10):
        n = int(rng.integers(5, 32))
        g = random_connected(rng, n, extra_edges=n // 2, uniform=True)
        k = int(rng.integers(1, min(5, n - 1)))
        assert select_path_centrality(g, k, iterative=True) == greedy_gr(g, k).nodes


def test_selectors_return_k_distinct_valid_nodes():
    rng = np.random.default_rng(11)
    g = random_connected(rng, 20, extra_edges=10)
    for picks in (select_random(g, 4, 0), select_degree(g, 4),
                  select_high_delay(g, 4), select_path_centrality(g, 4),
                  select_path_centrality(g, 4, iterative=True)):
        assert len(picks) == 4 and len(set(picks)) == 4
        assert all(0 <= v < 20 and g.delays[v] > 0 for v in picks)


def test_select_longpath_random():
    g = ring6()
    cfg = LongPathConfig(epsilon_len=0.5, kb=3)
    picks = select_longpath_random(g, cfg, seed=5)
    assert len(set(picks)) == 3
    assert select_longpath_random(g, LongPathConfig(kb=6), 0) == tuple(range(6))
    with pytest.raises(GraphError):
        select_longpath_random(g, LongPathConfig(kb=7), 0)
    with pytest.raises(GraphError):
        select_longpath_random(path_graph([2, 5, 3]), LongPathConfig(kb=1), 0)


def test_longpath_hit_rate_increases_with_kb():
    # fraction of trials where every threshold-3 pair improves grows with kb
    g = ring6()
    threshold = 3.0
    d0 = distance_matrix(g)
    qual = d0 >= threshold
    rates = []
    for kb in (1, 3, 5):
        hits = 0
        for t in range(60):
            st = UpgradeState.of(6, select_longpath_random(
                g, LongPathConfig(epsilon_len=0.5, kb=kb), seed=t))
            if np.all(distance_matrix(g, st)[qual] < d0[qual]):
                hits += 1
        rates.append(hits / 60)
    assert rates[0] <= rates[1] <= rates[2]
    assert rates[2] > 0


def test_restricted_spd():
    g = ring6()
    assert restricted_spd(g, None, 0.0) == spd(g)
    assert restricted_spd(g, None, 3.0) == 18.0  # six ordered antipodal pairs
    assert restricted_spd(g, None, 4.0) == 0.0   # beyond the diameter
    st = UpgradeState.of(6, [0])
    assert restricted_spd(g, st, 3.0) < 18.0


def test_restricted_pair_set_frozen_at_initial_distances():
    g = ring6()
    st = UpgradeState.of(6, [0, 3])
    d_st = distance_matrix(g, st)
    d0 = distance_matrix(g)
    qual = d0 >= 3.0
    np.fill_diagonal(qual, False)
    assert restricted_spd(g, st, 3.0) == float(d_st[qual].sum())


def test_epsilon_net_size():
    assert epsilon_net_size(0.5, 0.5) >= 1
    small = epsilon_net_size(0.5, 0.9)
    big = epsilon_net_size(0.1, 0.9)
    assert big > small
    assert epsilon_net_size(0.5, 0.9, b_prime=3.0) >= 3 * small - 3
    with pytest.raises(ValueError):
        epsilon_net_size(1.5, 0.5)


def test_greedy_dominates_every_single_vertex():
    rng = np.random.default_rng(13)
    g = random_connected(rng, 14, extra_edges=6)
    led = greedy_gr(g, 1)
    st = UpgradeState.empty(14)
    assert led.steps[0].rs == max(rs_of_vertex(g, st, v) for v in range(14))
