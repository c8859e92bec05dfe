"""Ground-truth solvers: exhaustive greedy and brute-force optimum.

Both keep the full n x n distance matrix in memory and refresh it after
each committed upgrade with the single-node composition rule

    d'(s, t) = min(d(s, t), d(s, v) + d(v, t) - l(v))    for t != v,

which is exact for zeroing one node v: a new shortest path either avoids v
or splits at v, and d(s, v) never changes when only v's delay drops (the
destination's delay is not paid).
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .graph import GraphError, UpgradeState, distance_matrix, effective_delay, spd


@dataclass
class ReductionStep:
    node: int
    rs: float
    spd_after: float
    wall_time: float
    estimated: bool = False


@dataclass
class ReductionLedger:
    """Per-step record of a selection run: chosen node, reduction, timing."""

    initial_spd: float
    steps: list[ReductionStep] = field(default_factory=list)
    estimated: bool = False

    @property
    def nodes(self):
        return tuple(s.node for s in self.steps)

    @property
    def total_rs(self):
        return sum(s.rs for s in self.steps)

    @property
    def final_rr(self):
        if not self.steps:
            return 0.0
        return (self.initial_spd - self.steps[-1].spd_after) / self.initial_spd

    def target_set(self, n):
        return UpgradeState.of(n, self.nodes)


def rs_of_vertex(g, st, v):
    """Exact SPD reduction from additionally zeroing v, by full recomputation."""
    v = int(v)
    if st is not None and v in st:
        raise GraphError(f"node {v} is already upgraded")
    if effective_delay(g, st, v) == 0.0:
        raise GraphError(f"node {v} already has zero delay")
    base = st if st is not None else UpgradeState.empty(g.node_count)
    return spd(g, base) - spd(g, base.add(v))


def _apply_zeroing(d, v, l_old, scratch=None):
    """In-place composition update of the distance matrix when v is zeroed."""
    m = scratch if scratch is not None else np.empty_like(d)
    np.add.outer(d[:, v], d[v, :], out=m)
    m -= l_old
    m[:, v] = np.inf  # d(s, v) never pays v's delay
    np.minimum(d, m, out=d)


def _candidate_rs(d, v, l_v, m, gain):
    """Reduction from zeroing v, vectorized against the stored matrix."""
    np.add.outer(d[:, v], d[v, :], out=m)
    m -= l_v
    np.subtract(d, m, out=gain)
    np.clip(gain, 0.0, None, out=gain)
    gain[:, v] = 0.0
    return float(gain.sum())


def greedy_gr(g, k, node_cap=5000, audit_distances=False):
    """Exhaustive greedy: per step, the exact best single vertex.

    Ties go to the lowest node id.  ``audit_distances`` re-derives the
    matrix from scratch after every commit and asserts equality (test
    hook; slow).
    """
    n = g.node_count
    if n > node_cap:
        raise GraphError(f"greedy_gr refuses n={n} > node_cap={node_cap}")
    if not (1 <= k < n):
        raise GraphError(f"budget k={k} must satisfy 1 <= k < n={n}")
    eff = g.delays.copy()
    if int(np.count_nonzero(eff > 0)) < k:
        raise GraphError("fewer than k positive-delay nodes")

    d = distance_matrix(g)
    ledger = ReductionLedger(initial_spd=float(d.sum()))
    m = np.empty_like(d)
    gain = np.empty_like(d)
    st = UpgradeState.empty(n)
    for _ in range(k):
        t0 = time.perf_counter()
        best_v, best_rs = -1, -1.0
        for v in np.flatnonzero(eff > 0).tolist():
            rs = _candidate_rs(d, v, eff[v], m, gain)
            if rs > best_rs:
                best_v, best_rs = v, rs
        _apply_zeroing(d, best_v, eff[best_v], scratch=m)
        eff[best_v] = 0.0
        st = st.add(best_v)
        if audit_distances:
            fresh = distance_matrix(g, st)
            if not np.array_equal(d, fresh):
                raise AssertionError("incremental distance update drifted "
                                     "from fresh recomputation")
        ledger.steps.append(ReductionStep(
            node=best_v, rs=best_rs, spd_after=float(d.sum()),
            wall_time=time.perf_counter() - t0))
    return ledger


def brute_force_optimal(g, k, max_subsets=2_000_000):
    """Exact optimum over all size-k subsets; ties resolved lexicographically.

    Returns (nodes, rs).  Guarded by an enumeration cap.
    """
    n = g.node_count
    if not (1 <= k < n):
        raise GraphError(f"budget k={k} must satisfy 1 <= k < n={n}")
    count = math.comb(n, k)
    if count > max_subsets:
        raise GraphError(f"C({n},{k}) = {count} exceeds enumeration cap {max_subsets}")
    d0 = distance_matrix(g)
    total = float(d0.sum())
    scratch = np.empty_like(d0)
    best_set, best_rs = None, -1.0
    for subset in itertools.combinations(range(n), k):
        d = d0.copy()
        for v in subset:
            _apply_zeroing(d, v, g.delays[v], scratch=scratch)
        rs = total - float(d.sum())
        if rs > best_rs:
            best_set, best_rs = subset, rs
    return best_set, best_rs
