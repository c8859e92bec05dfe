"""Node-delay graphs and upgrade-aware shortest paths.

A network is an undirected, connected, simple graph whose cost lives on the
nodes: node v carries a positive delay l(v), and the delay of a path is the
sum of l(.) over every vertex of the path except the destination (the
destination forwards nothing, so it never pays).  Upgrading a node overrides
its delay to zero.

Node costs reduce to directed edge costs: traversing u -> v pays the
effective delay of u.  A forward Dijkstra run under that weighting yields
d(root, t) for all t.  Distances toward a root follow from the reversal
identity d(s, t) - l_eff(s) = d(t, s) - l_eff(t), valid because the vertex
set of an s -> t path equals that of the reversed path on an undirected
graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra


class GraphError(ValueError):
    """Raised for structurally invalid graphs or invalid queries on them."""


class DelayGraph:
    """Immutable undirected simple connected graph with per-node delays.

    Adjacency is stored CSR-style (``indptr``/``indices``) with neighbor
    lists sorted per node.  Delays are float64; ``is_uniform`` is true iff
    every delay equals 1, which unlocks the hop-count (BFS) fast paths.
    """

    __slots__ = ("indptr", "indices", "delays", "labels", "is_uniform", "degrees")

    def __init__(self, indptr, indices, delays, labels=None, validate=True,
                 allow_zero_delay=False):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.delays = np.asarray(delays, dtype=np.float64)
        self.labels = tuple(labels) if labels is not None else None
        self.degrees = np.diff(self.indptr)
        if validate:
            self._validate(allow_zero_delay)
        self.is_uniform = bool(np.all(self.delays == 1.0))

    def _validate(self, allow_zero_delay):
        n = self.node_count
        if n < 2:
            raise GraphError("graph needs at least 2 nodes")
        if self.delays.shape != (n,):
            raise GraphError("delay array length does not match node count")
        if np.any(self.delays < 0):
            raise GraphError("negative delays are not allowed")
        if not allow_zero_delay and np.any(self.delays == 0):
            raise GraphError("zero delays are not allowed at construction "
                             "(use collapse_zero_delay or an UpgradeState)")
        if self.labels is not None and len(self.labels) != n:
            raise GraphError("label list length does not match node count")
        rows = np.repeat(np.arange(n), self.degrees)
        if rows.shape != self.indices.shape:
            raise GraphError("indptr/indices are inconsistent")
        if np.any(rows == self.indices):
            raise GraphError("self-loops are not allowed")
        for v in range(n):
            row = self.indices[self.indptr[v]:self.indptr[v + 1]]
            if row.size and (np.any(np.diff(row) <= 0) or row.min() < 0 or row.max() >= n):
                raise GraphError("adjacency rows must be sorted, unique and in range")
        structure = csr_matrix(
            (np.ones(self.indices.size), self.indices, self.indptr), shape=(n, n))
        if (structure != structure.T).nnz != 0:
            raise GraphError("adjacency is not symmetric")
        pieces = connected_components(structure, directed=False, return_labels=False)
        if pieces != 1:
            raise GraphError(f"graph is disconnected ({pieces} components)")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_edges(cls, n, edges, delays, labels=None, allow_zero_delay=False):
        """Build a graph from an iterable of (u, v) pairs.

        Edges are deduplicated and symmetrized; self-loops are rejected.
        """
        seen = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            seen.add((u, v) if u < v else (v, u))
        if not seen:
            raise GraphError("graph has no edges")
        e = np.array(sorted(seen), dtype=np.int64)
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        indptr = np.cumsum(indptr)
        return cls(indptr, dst, delays, labels=labels,
                   allow_zero_delay=allow_zero_delay)

    def with_delays(self, delays, allow_zero_delay=False):
        """Same structure, new delays."""
        delays = np.asarray(delays, dtype=np.float64)
        if delays.shape != (self.node_count,):
            raise GraphError("delay array length does not match node count")
        if np.any(delays < 0) or (not allow_zero_delay and np.any(delays == 0)):
            raise GraphError("delays must be positive")
        return DelayGraph(self.indptr, self.indices, delays,
                          labels=self.labels, validate=False,
                          allow_zero_delay=allow_zero_delay)

    # -- basic queries -------------------------------------------------------

    @property
    def node_count(self):
        return self.indptr.size - 1

    @property
    def edge_count(self):
        return self.indices.size // 2

    def neighbors(self, v):
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def adjacency_sets(self):
        """Per-node neighbor sets (a mutable copy, for editing views)."""
        return [set(self.neighbors(v).tolist()) for v in range(self.node_count)]

    def edge_list(self):
        """Sorted list of (u, v) with u < v."""
        out = []
        for u in range(self.node_count):
            for v in self.neighbors(u):
                if u < v:
                    out.append((u, int(v)))
        return out

    def label_of(self, v):
        return self.labels[v] if self.labels is not None else str(v)

    def __repr__(self):
        kind = "uniform" if self.is_uniform else "general"
        return f"DelayGraph(n={self.node_count}, m={self.edge_count}, {kind})"


class UpgradeState:
    """The evolving target set: which nodes have had their delay zeroed.

    Value semantics: ``add`` returns a new state, so workers can share a
    parent state and extend private copies.  ``gateways`` is filled in by
    the uniform-model path-count machinery and maps each upgraded node to
    the delay-1 boundary of its zero-delay cluster.
    """

    __slots__ = ("upgraded", "zeroed", "gateways")

    def __init__(self, upgraded, zeroed, gateways=None):
        self.upgraded = tuple(upgraded)
        self.zeroed = zeroed
        self.gateways = gateways

    @classmethod
    def empty(cls, n):
        return cls((), np.zeros(n, dtype=bool))

    @classmethod
    def of(cls, n, nodes):
        st = cls.empty(n)
        for v in nodes:
            st = st.add(v)
        return st

    def add(self, v):
        v = int(v)
        if not (0 <= v < self.zeroed.size):
            raise GraphError(f"node {v} out of range")
        if self.zeroed[v]:
            raise GraphError(f"node {v} is already upgraded")
        zeroed = self.zeroed.copy()
        zeroed[v] = True
        return UpgradeState(self.upgraded + (v,), zeroed)

    def __contains__(self, v):
        return bool(self.zeroed[v])

    def __len__(self):
        return len(self.upgraded)

    def __repr__(self):
        return f"UpgradeState({list(self.upgraded)})"


@dataclass(frozen=True)
class DistanceField:
    """Single-source distances under an upgrade state.

    ``from_root``: dist[t] = d(root, t), the cost of reaching t from root
    paying every vertex except t.  ``to_root``: dist[s] = d(s, root).
    """

    root: int
    direction: str
    dist: np.ndarray


@dataclass(frozen=True)
class GraphStats:
    """Diameter, delay extremes and initial SPD of a graph (no upgrades)."""

    diameter: float
    l_min: float
    l_max: float
    spd: float


def effective_delay(g, st, v):
    """Delay actually paid at v: 0 if upgraded, else l(v)."""
    v = int(v)
    if not (0 <= v < g.node_count):
        raise GraphError(f"node {v} out of range")
    if st is not None and st.zeroed[v]:
        return 0.0
    return float(g.delays[v])


def effective_delays(g, st):
    """Vector of effective delays under ``st`` (None means no upgrades)."""
    if st is None:
        return g.delays.copy()
    return np.where(st.zeroed, 0.0, g.delays)


def weight_matrix(g, st=None, eff=None):
    """Directed CSR weight matrix realizing the node-to-edge reduction.

    Every arc u -> v is weighted by the effective delay of u, so an
    edge-weighted shortest path sums exactly the path vertices minus the
    destination.  Explicit zeros are kept: they are real zero-cost arcs.
    """
    if eff is None:
        eff = effective_delays(g, st)
    data = np.repeat(eff, g.degrees)
    n = g.node_count
    return csr_matrix((data, g.indices, g.indptr), shape=(n, n))


def distance_rows(g, st, sources, eff=None):
    """Dijkstra rows d(s, .) for each s in ``sources``; shape (len, n)."""
    w = weight_matrix(g, st, eff=eff)
    rows = dijkstra(w, directed=True, indices=np.asarray(sources, dtype=np.int64))
    return np.atleast_2d(rows)


def sssp(g, st, root, direction="from_root"):
    """Single-source shortest path delays under an upgrade state.

    ``to_root`` reuses the forward run from root and applies the reversal
    correction d(s, root) = d(root, s) - l_eff(root) + l_eff(s).
    """
    root = int(root)
    if not (0 <= root < g.node_count):
        raise GraphError(f"root {root} out of range")
    if direction not in ("from_root", "to_root"):
        raise GraphError(f"unknown direction {direction!r}")
    eff = effective_delays(g, st)
    row = distance_rows(g, st, [root], eff=eff)[0]
    if direction == "from_root":
        return DistanceField(root, direction, row)
    dist = row - eff[root] + eff
    dist[root] = 0.0
    return DistanceField(root, direction, dist)


def distance_matrix(g, st=None):
    """Dense all-pairs matrix D[s, t] = d(s, t | st).  O(n^2) memory."""
    w = weight_matrix(g, st)
    return dijkstra(w, directed=True)


def spd(g, st=None):
    """Sum of shortest-path delays over all ordered pairs."""
    return float(distance_matrix(g, st).sum())


def graph_stats(g):
    """Diameter, l_min/l_max and initial SPD.  Runs n Dijkstra passes."""
    d = distance_matrix(g)
    return GraphStats(diameter=float(d.max()),
                      l_min=float(g.delays.min()),
                      l_max=float(g.delays.max()),
                      spd=float(d.sum()))


def collapse_zero_delay(g):
    """Remove zero-delay nodes, cliquing each removed node's neighbors.

    Pairwise distances between surviving nodes are preserved.  Use this to
    restore l_min > 0 before applying delay-sensitive sampling bounds.
    """
    zero = np.flatnonzero(g.delays == 0)
    if zero.size == 0:
        return g
    n = g.node_count
    if n - zero.size < 2:
        raise GraphError("collapsing zero-delay nodes leaves fewer than 2 nodes")
    adj = g.adjacency_sets()
    for v in zero.tolist():
        nbrs = sorted(adj[v])
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                adj[a].add(b)
                adj[b].add(a)
        for u in nbrs:
            adj[u].discard(v)
        adj[v] = set()
    keep = np.flatnonzero(g.delays > 0)
    remap = {int(old): new for new, old in enumerate(keep.tolist())}
    edges = []
    for old in keep.tolist():
        for w in adj[old]:
            if old < w:
                edges.append((remap[old], remap[w]))
    labels = [g.label_of(int(v)) for v in keep] if g.labels is not None else None
    return DelayGraph.from_edges(len(keep), edges, g.delays[keep], labels=labels)
