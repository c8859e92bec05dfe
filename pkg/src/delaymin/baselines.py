"""Comparison selectors and the long-path restricted metric.

Selectors return k distinct nodes (never an already-zero-delay one) and
are pure given (graph, seed).  The restricted metric sums distances only
over pairs whose initial distance meets a threshold; a random vertex set
sized by the epsilon-net bound hits every such long path with the stated
probability, which yields a k-approximation certificate to compare
against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exact import _apply_zeroing
from .graph import GraphError, distance_matrix

_REL_TOL = 1e-9  # membership equality slack; exact for integer delays


@dataclass(frozen=True)
class LongPathConfig:
    """Random baseline for paths of delay >= epsilon_len * n."""

    epsilon_len: float = 0.1
    kb: int = 1
    delta: float = 0.9
    trials: int = 10

    def threshold_for(self, n):
        return self.epsilon_len * n


def epsilon_net_size(epsilon, delta, b_prime=1.0):
    """Sample size making a random vertex set an epsilon-net.

    ceil(b' * (2/eps ln(2/eps) + 1/eps ln(1/delta))); the constant b' is
    unknown in theory and exposed as a multiplier (default 1).
    """
    if not (0 < epsilon < 1):
        raise ValueError("epsilon must be in (0, 1)")
    if not (0 < delta < 1):
        raise ValueError("delta must be in (0, 1)")
    value = b_prime * ((2 / epsilon) * math.log(2 / epsilon)
                       + (1 / epsilon) * math.log(1 / delta))
    return max(1, math.ceil(value))


def _eligible(g):
    mask = g.delays > 0
    if not mask.any():
        raise GraphError("no positive-delay nodes to select from")
    return mask


def select_random(g, k, seed):
    """k distinct uniform nodes."""
    mask = _eligible(g)
    pool = np.flatnonzero(mask)
    if k >= g.node_count or k > pool.size:
        raise GraphError(f"cannot draw k={k} distinct nodes")
    rng = np.random.default_rng(seed)
    return tuple(int(v) for v in rng.choice(pool, size=k, replace=False))


def select_degree(g, k):
    """Top-k by degree, lowest id on ties."""
    if k >= g.node_count:
        raise GraphError(f"k={k} must be below n={g.node_count}")
    mask = _eligible(g)
    order = np.argsort(np.where(mask, -g.degrees, np.inf), kind="stable")
    return tuple(int(v) for v in order[:k])


def select_high_delay(g, k):
    """Top-k by delay, lowest id on ties."""
    if k >= g.node_count:
        raise GraphError(f"k={k} must be below n={g.node_count}")
    order = np.argsort(-g.delays, kind="stable")
    return tuple(int(v) for v in order[:k])


def _membership_counts(d, tol=_REL_TOL):
    """counts[v] = ordered pairs (s, t), s != v != t, with v on a shortest path."""
    n = d.shape[0]
    counts = np.zeros(n, dtype=np.int64)
    slack = tol * (1.0 + np.abs(d))
    m = np.empty_like(d)
    for v in range(n):
        np.add.outer(d[:, v], d[v, :], out=m)
        m -= d
        np.abs(m, out=m)
        on = m <= slack
        on[v, :] = False
        on[:, v] = False
        np.fill_diagonal(on, False)
        counts[v] = int(on.sum())
    return counts


def select_path_centrality(g, k, iterative=False, node_cap=5000):
    """Score delay(v) x (covered ordered pairs through v); take top-k.

    The iterative variant re-zeroes the chosen node and recounts after
    each pick.  Under unit delays the iterative variant selects exactly
    like the exhaustive greedy: both rank by the covered-pair count, which
    differs from the exact per-step reduction only by a candidate-
    independent n - 1 offset.
    """
    n = g.node_count
    if k >= n:
        raise GraphError(f"k={k} must be below n={n}")
    if n > node_cap:
        raise GraphError(f"path centrality refuses n={n} > node_cap={node_cap}")
    eff = g.delays.copy()
    d = distance_matrix(g)
    if not iterative:
        scores = eff * _membership_counts(d)
        scores[eff <= 0] = -np.inf
        order = np.argsort(-scores, kind="stable")
        return tuple(int(v) for v in order[:k])
    picked = []
    for _ in range(k):
        scores = eff * _membership_counts(d)
        masked = np.where(eff > 0, scores, -np.inf)
        if not np.isfinite(masked.max()):
            raise GraphError("no positive-delay candidate remains")
        v = int(np.argmax(masked))
        _apply_zeroing(d, v, eff[v])
        eff[v] = 0.0
        picked.append(v)
    return tuple(picked)


def select_longpath_random(g, cfg, seed):
    """cfg.kb distinct uniform nodes, the epsilon-net style baseline.

    kb = n degenerates to selecting every vertex (all long paths hit).
    """
    if not g.is_uniform:
        raise GraphError("the long-path baseline is defined for unit delays")
    if cfg.kb > g.node_count:
        raise GraphError(f"kb={cfg.kb} exceeds n={g.node_count}")
    if cfg.kb == g.node_count:
        return tuple(range(g.node_count))
    return select_random(g, cfg.kb, seed)


def restricted_spd(g, st, threshold):
    """Sum of d(s, t | st) over pairs whose initial distance >= threshold.

    The qualifying pair set is frozen by the initial (no-upgrade)
    distances and then re-summed under ``st``.
    """
    if threshold < 0:
        raise GraphError("threshold must be nonnegative")
    d0 = distance_matrix(g)
    qual = d0 >= threshold
    np.fill_diagonal(qual, False)
    if st is None or len(st) == 0:
        return float(d0[qual].sum())
    return float(distance_matrix(g, st)[qual].sum())
