"""Shared fixtures-in-functions and independent oracles for the test suite.

The distance oracle enumerates every simple path and sums vertex delays
minus the destination by hand; it shares no code with the shortest-path
implementation under test.
"""

import itertools
import math

import numpy as np

from delaymin import DelayGraph, UpgradeState


def ring6():
    return DelayGraph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)], np.ones(6))


def path_graph(delays):
    n = len(delays)
    return DelayGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)], delays)


def two_node():
    return DelayGraph.from_edges(2, [(0, 1)], [1.0, 1.0])


def star(leaves, center_delay=1.0, leaf_delay=1.0):
    delays = [center_delay] + [leaf_delay] * leaves
    return DelayGraph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)],
                                 delays)


def clique(n, delays=None):
    edges = list(itertools.combinations(range(n), 2))
    return DelayGraph.from_edges(n, edges, np.ones(n) if delays is None else delays)


def cycle(n, delays=None):
    return DelayGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)],
                                 np.ones(n) if delays is None else delays)


# -- random instance builders (seeded, reproducible) ------------------------


def int_delays(rng, n, lo=1, hi=9):
    return rng.integers(lo, hi + 1, size=n).astype(float)


def random_tree(rng, n, delays=None):
    edges = [(i, int(rng.integers(0, i))) for i in range(1, n)]
    return DelayGraph.from_edges(n, edges,
                                 int_delays(rng, n) if delays is None else delays)


def random_bipartite(rng, a, b, delays=None):
    edges = [(i, a + j) for i in range(a) for j in range(b)]
    n = a + b
    return DelayGraph.from_edges(n, edges,
                                 int_delays(rng, n) if delays is None else delays)


def random_connected(rng, n, extra_edges=0, uniform=False):
    """Random recursive tree skeleton plus random extra edges."""
    edges = {(int(rng.integers(0, i)), i) for i in range(1, n)}
    for _ in range(extra_edges):
        u, v = rng.integers(0, n, size=2)
        if u != v:
            edges.add((min(int(u), int(v)), max(int(u), int(v))))
    delays = np.ones(n) if uniform else int_delays(rng, n)
    return DelayGraph.from_edges(n, edges, delays)


def random_state(rng, g, max_upgrades):
    count = int(rng.integers(0, max_upgrades + 1))
    nodes = rng.choice(g.node_count, size=count, replace=False)
    return UpgradeState.of(g.node_count, [int(v) for v in nodes])


# -- exhaustive path-enumeration oracle (n <= 8 territory) ------------------


def oracle_distance(g, st, s, t):
    """Min over all simple s-t paths of the sum of effective delays,
    excluding the destination."""
    if s == t:
        return 0.0
    eff = [0.0 if (st is not None and v in st) else float(g.delays[v])
           for v in range(g.node_count)]
    best = math.inf
    stack = [(s, {s}, eff[s])]
    while stack:
        node, visited, cost = stack.pop()
        if cost >= best:
            continue
        for w in g.neighbors(node):
            w = int(w)
            if w == t:
                best = min(best, cost)
            elif w not in visited:
                stack.append((w, visited | {w}, cost + eff[w]))
    return best


def oracle_distance_matrix(g, st=None):
    n = g.node_count
    d = np.zeros((n, n))
    for s in range(n):
        for t in range(n):
            if s != t:
                d[s, t] = oracle_distance(g, st, s, t)
    return d


def oracle_spd(g, st=None):
    return float(oracle_distance_matrix(g, st).sum())


def oracle_membership(g, st, s, t):
    """Delay-1 vertices on some shortest s-t path, via the distance identity."""
    from delaymin import distance_matrix, effective_delays

    d = distance_matrix(g, st)
    eff = effective_delays(g, st)
    out = set()
    for v in range(g.node_count):
        if v in (s, t) or eff[v] != 1.0:
            continue
        if d[s, v] + d[v, t] == d[s, t]:
            out.add(v)
    return out
