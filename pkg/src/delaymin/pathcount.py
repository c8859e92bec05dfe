"""Uniform-model selection by sampled shortest-path membership counts.

With unit delays, zeroing a non-upgraded vertex v reduces SPD by exactly
zeta(v) + (n - 1): one unit for each ordered pair (s, t), v not an
endpoint, with v on at least one shortest path, plus one unit for each of
the n - 1 pairs where v is the source.  The (n - 1) term is the same for
every candidate, so ranking by zeta alone reproduces the exhaustive greedy
choice.  zeta is estimated by tallying membership over sampled pairs.

Membership queries run on an edited view of the graph in which zero-delay
vertices are deleted and their neighborhoods cliqued; hop distance between
surviving vertices in that view equals the delayed distance in the
original graph.  Endpoints that were deleted are reached through their
gateway lists: the delay-1 vertices bordering their zero-delay cluster.
"""

from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass

import numpy as np

from .exact import ReductionLedger, ReductionStep, rs_of_vertex
from .graph import GraphError, UpgradeState, distance_matrix, spd
from .sampling import (DEFAULT_C_FACTOR, SamplingConfig, draw_pairs,
                       practical_sample_size)


def sample_size_uniform(n, epsilon):
    """Pairs needed for the per-step error bound under unit delays.

    p = ceil(2 ln(4 n^3) / epsilon^2).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not (0 < epsilon <= 1):
        raise ValueError("epsilon must be in (0, 1]")
    return max(1, math.ceil(2.0 * math.log(4 * n ** 3) / epsilon ** 2))


@dataclass
class PathCountTally:
    """Sampled membership counters; zeta[v] <= pairs_used, 0 for upgraded v."""

    zeta: np.ndarray
    pairs_used: int


class EditedGraph:
    """Zero-delay-collapsed view of a uniform graph, editable in place.

    ``alive`` marks surviving (delay-1) vertices; ``adj`` holds their
    current neighbor sets including clique fill-in recorded in
    ``extra_edges``.  Hop distances between alive vertices equal delayed
    distances in the base graph under the corresponding upgrade state.
    """

    __slots__ = ("base", "alive", "adj", "extra_edges")

    def __init__(self, base, alive, adj, extra_edges):
        self.base = base
        self.alive = alive
        self.adj = adj
        self.extra_edges = extra_edges

    @classmethod
    def from_graph(cls, g, st=None):
        if not g.is_uniform:
            raise GraphError("edited views require a uniform (unit-delay) graph")
        eg = cls(g, np.ones(g.node_count, dtype=bool), g.adjacency_sets(), set())
        if st is not None:
            for v in st.upgraded:
                eg.delete(v)
        return eg

    def delete(self, v):
        """Remove v and make its current neighborhood a clique."""
        v = int(v)
        if not self.alive[v]:
            raise GraphError(f"node {v} is not alive in the edited view")
        nbrs = sorted(self.adj[v])
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                if b not in self.adj[a]:
                    self.adj[a].add(b)
                    self.adj[b].add(a)
                    self.extra_edges.add((a, b))
        for u in nbrs:
            self.adj[u].discard(v)
        self.adj[v] = set()
        self.alive[v] = False

    def hops_from(self, sources):
        """Multi-source BFS hop counts; -1 where unreachable or dead."""
        hops = np.full(self.base.node_count, -1, dtype=np.int64)
        queue = deque()
        for s in sources:
            if hops[s] == -1:
                hops[s] = 0
                queue.append(int(s))
        while queue:
            u = queue.popleft()
            h = hops[u] + 1
            for w in self.adj[u]:
                if hops[w] == -1:
                    hops[w] = h
                    queue.append(w)
        return hops


@dataclass
class GatewayInfo:
    """Zero-delay clusters of an upgrade state and their delay-1 boundaries."""

    cluster_of: np.ndarray      # cluster index per node, -1 for alive nodes
    gateways: list[tuple[int, ...]]


def build_gateway_info(g, st):
    """Group upgraded nodes into connected zero clusters; find boundaries."""
    n = g.node_count
    cluster_of = np.full(n, -1, dtype=np.int64)
    gateways = []
    for v in st.upgraded:
        if cluster_of[v] != -1:
            continue
        cid = len(gateways)
        members = [v]
        cluster_of[v] = cid
        queue = deque([v])
        boundary = set()
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                w = int(w)
                if st.zeroed[w]:
                    if cluster_of[w] == -1:
                        cluster_of[w] = cid
                        members.append(w)
                        queue.append(w)
                else:
                    boundary.add(w)
        gateways.append(tuple(sorted(boundary)))
    return GatewayInfo(cluster_of, gateways)


def attach_gateways(st, info):
    """Populate st.gateways from cluster boundaries; returns st."""
    st.gateways = {v: info.gateways[info.cluster_of[v]] for v in st.upgraded}
    return st


def _membership_and_distance(eg, st, s, t, info):
    """Delay-1 vertices on some shortest s-t path, plus d(s, t)."""
    s, t = int(s), int(t)
    if s == t:
        raise GraphError("membership queries need distinct endpoints")
    zs, zt = bool(st.zeroed[s]), bool(st.zeroed[t])
    if not zs and not zt:
        hs = eg.hops_from([s])
        ht = eg.hops_from([t])
        dst = int(hs[t])
        on = np.flatnonzero((hs >= 0) & (ht >= 0) & (hs + ht == dst))
        members = set(on.tolist()) - {s, t}
        return members, float(dst)
    if zs and zt:
        if info.cluster_of[s] == info.cluster_of[t]:
            return set(), 0.0
        gs = info.gateways[info.cluster_of[s]]
        gt = info.gateways[info.cluster_of[t]]
        ha = eg.hops_from(gs)
        hb = eg.hops_from(gt)
        dmin = int(min(ha[u] for u in gt))
        on = np.flatnonzero((ha >= 0) & (hb >= 0) & (ha + hb == dmin))
        return set(on.tolist()), float(dmin + 1)
    # one zero endpoint: arrange for s to be the alive one
    swapped = zs
    if swapped:
        s, t = t, s
    gt = info.gateways[info.cluster_of[t]]
    hs = eg.hops_from([s])
    dmin = int(min(hs[u] for u in gt))
    nearest = [u for u in gt if hs[u] == dmin]
    hu = eg.hops_from(nearest)
    on = np.flatnonzero((hs >= 0) & (hu >= 0) & (hs + hu == dmin))
    members = set(on.tolist()) - {s}
    # alive -> zero pays the alive source; the reverse direction does not
    dist = float(dmin + 1) if not swapped else float(dmin)
    return members, dist


def membership_bfs(eg, st, s, t, info=None):
    """Set of delay-1 vertices lying on at least one shortest s-t path.

    Excludes s and t.  Handles alive/alive, alive/zero and zero/zero
    endpoint cases via the edited view and gateway lists.
    """
    if info is None:
        info = build_gateway_info(eg.base, st)
    members, _ = _membership_and_distance(eg, st, s, t, info)
    return members


def tally_paths(eg, st, sample, info=None):
    """Accumulate membership counts over a pair sample."""
    if info is None:
        info = build_gateway_info(eg.base, st)
    zeta = np.zeros(eg.base.node_count, dtype=np.int64)
    for s, t in sample.pairs:
        members, _ = _membership_and_distance(eg, st, s, t, info)
        for v in members:
            zeta[v] += 1
    return PathCountTally(zeta=zeta, pairs_used=sample.size)


def exact_zeta(g, st, v):
    """Ordered pairs (s, t), v not an endpoint, with v on a shortest path.

    Brute force over the full distance matrix: v is on a shortest s-t path
    iff d(s, v) + d(v, t) = d(s, t) (d(s, v) excludes v's delay, d(v, t)
    includes it, so the concatenation counts every vertex but t once).
    """
    if not g.is_uniform:
        raise GraphError("exact_zeta requires a uniform (unit-delay) graph")
    v = int(v)
    if st is not None and v in st:
        raise GraphError(f"node {v} is already upgraded")
    d = distance_matrix(g, st)
    on = d[:, v][:, None] + d[v, :][None, :] == d
    on[v, :] = False
    on[:, v] = False
    np.fill_diagonal(on, False)
    return int(on.sum())


def verify_pathcount_identity(g, st, v):
    """True iff RS(v | st) = zeta(v) + (n - 1); the module's keystone."""
    rs = rs_of_vertex(g, st, v)
    return rs == exact_zeta(g, st, v) + (g.node_count - 1)


def pcs_select(g, k, cfg=SamplingConfig(), pairs=None, exact_audit_cap=2000):
    """Path-count sampling greedy for uniform delays.

    Per round: draw p pairs (fresh each round by default; configurable),
    tally shortest-path membership, commit the argmax-zeta vertex (lowest
    id on ties), collapse it in the edited view and refresh gateway lists.
    Below ``exact_audit_cap`` nodes the ledger carries exact per-step
    reductions; above it, tally-scaled estimates flagged as estimated.
    """
    if not g.is_uniform:
        raise GraphError("pcs_select requires a uniform (unit-delay) graph")
    n = g.node_count
    if not (1 <= k < n):
        raise GraphError(f"budget k={k} must satisfy 1 <= k < n={n}")
    rng = np.random.default_rng(cfg.seed)
    if pairs is not None:
        p = pairs.size
    elif cfg.explicit_p is not None:
        p = int(cfg.explicit_p)
    elif cfg.epsilon is not None:
        p = sample_size_uniform(n, cfg.epsilon)
    else:
        p = practical_sample_size(n, cfg.c_factor or DEFAULT_C_FACTOR)
    resample = (cfg.resample_each_iteration is not False) and pairs is None
    scale = n * (n - 1) / p
    audit = n <= exact_audit_cap

    st = UpgradeState.empty(n)
    eg = EditedGraph.from_graph(g)
    info = build_gateway_info(g, st)
    sample = pairs if pairs is not None else draw_pairs(n, p, rng)
    ledger = None
    current_spd = spd(g, st) if audit else None
    for step in range(k):
        t0 = time.perf_counter()
        if resample and step > 0:
            sample = draw_pairs(n, p, rng)
        zeta = np.zeros(n, dtype=np.int64)
        dist_sum = 0.0
        for s, t in sample.pairs:
            members, dist = _membership_and_distance(eg, st, s, t, info)
            dist_sum += dist
            for v in members:
                zeta[v] += 1
        if ledger is None:
            initial = current_spd if audit else dist_sum * scale
            ledger = ReductionLedger(initial_spd=initial, estimated=not audit)
        masked = np.where(eg.alive, zeta, -1)
        if masked.max() < 0:
            raise GraphError("no positive-delay candidate remains")
        v = int(np.argmax(masked))  # first max = lowest id on ties
        st = st.add(v)
        eg.delete(v)
        info = build_gateway_info(g, st)
        attach_gateways(st, info)
        if audit:
            after = spd(g, st)
            rs = current_spd - after
            current_spd = after
        else:
            rs = zeta[v] * scale + (n - 1)
            after = ledger.initial_spd - ledger.total_rs - rs
        ledger.steps.append(ReductionStep(
            node=v, rs=rs, spd_after=after,
            wall_time=time.perf_counter() - t0, estimated=not audit))
    return ledger
