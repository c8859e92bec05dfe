"""Graph ingestion, delay assignment, and synthetic generation.

File formats (bit-exact, round-trippable):

* edge file: one ``u v`` pair per line, whitespace-separated labels,
  ``#`` starts a comment; duplicates and reversed repeats collapse to one
  undirected edge.
* delay file: one ``label value`` per line; every node named in the edge
  file must get exactly one entry.

All randomness flows through numpy's seeded PCG64 generator, so a fixed
seed reproduces graphs and delays bit-for-bit across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import DelayGraph, GraphError


class ParseError(ValueError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


@dataclass(frozen=True)
class GraphFileSpec:
    edge_path: str
    delay_path: str | None = None
    default_delay: float = 1.0
    label_mode: str = "string"   # or "integer"


@dataclass(frozen=True)
class BaSpec:
    """Preferential-attachment generator: seed clique of edges_per_node + 1
    nodes, then each arrival attaches to that many distinct existing nodes
    with probability proportional to current degree."""

    n: int
    edges_per_node: int
    seed: int = 42


def _read_tokens(path):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line.split()


def load_graph(spec):
    """Parse, deduplicate, symmetrize and validate a DelayGraph."""
    if isinstance(spec, str):
        spec = GraphFileSpec(edge_path=spec)
    raw_edges = []
    order = {}
    for lineno, tokens in _read_tokens(spec.edge_path):
        if len(tokens) != 2:
            raise ParseError(spec.edge_path, lineno,
                             f"expected two labels, got {len(tokens)}")
        a, b = tokens
        if a == b:
            raise ParseError(spec.edge_path, lineno, f"self-loop at {a!r}")
        for lbl in (a, b):
            if lbl not in order:
                order[lbl] = len(order)
        raw_edges.append((a, b))
    if not raw_edges:
        raise ParseError(spec.edge_path, 0, "edge file is empty")

    if spec.label_mode == "integer":
        try:
            numeric = sorted(order, key=int)
        except ValueError as exc:
            raise ParseError(spec.edge_path, 0,
                             f"label_mode=integer but non-integer label: {exc}")
        ids = {lbl: i for i, lbl in enumerate(numeric)}
        labels = numeric
    elif spec.label_mode == "string":
        ids = order
        labels = sorted(order, key=order.get)
    else:
        raise GraphError(f"unknown label_mode {spec.label_mode!r}")

    n = len(ids)
    edges = [(ids[a], ids[b]) for a, b in raw_edges]

    if spec.delay_path is None:
        if spec.default_delay <= 0:
            raise GraphError("default delay must be positive")
        delays = np.full(n, float(spec.default_delay))
    else:
        delays = np.full(n, np.nan)
        for lineno, tokens in _read_tokens(spec.delay_path):
            if len(tokens) != 2:
                raise ParseError(spec.delay_path, lineno,
                                 f"expected 'label value', got {len(tokens)} tokens")
            lbl, value = tokens
            if lbl not in ids:
                raise ParseError(spec.delay_path, lineno,
                                 f"unknown node {lbl!r} (not in edge file)")
            if not np.isnan(delays[ids[lbl]]):
                raise ParseError(spec.delay_path, lineno,
                                 f"duplicate delay entry for {lbl!r}")
            try:
                delays[ids[lbl]] = float(value)
            except ValueError:
                raise ParseError(spec.delay_path, lineno,
                                 f"bad delay value {value!r}")
        missing = np.isnan(delays).sum()
        if missing:
            raise GraphError(f"{missing} node(s) have no delay entry")
    return DelayGraph.from_edges(n, edges, delays, labels=labels)


def save_graph(g, edge_path, delay_path=None):
    """Write the edge list (and optionally delays) in the ingestion format."""
    with open(edge_path, "w", encoding="utf-8") as fh:
        for u, v in g.edge_list():
            fh.write(f"{g.label_of(u)} {g.label_of(v)}\n")
    if delay_path is not None:
        with open(delay_path, "w", encoding="utf-8") as fh:
            for v in range(g.node_count):
                fh.write(f"{g.label_of(v)} {float(g.delays[v])!r}\n")


def generate_ba(spec):
    """Preferential-attachment graph with unit delays; connected by build."""
    n, m = spec.n, spec.edges_per_node
    if not (1 <= m < n):
        raise GraphError(f"need 1 <= edges_per_node < n, got m={m}, n={n}")
    rng = np.random.default_rng(spec.seed)
    edges = [(i, j) for i in range(m + 1) for j in range(i + 1, m + 1)]
    repeated = [v for e in edges for v in e]  # degree-weighted node pool
    for src in range(m + 1, n):
        targets = set()
        while len(targets) < m:
            targets.add(repeated[int(rng.integers(len(repeated)))])
        for t in sorted(targets):
            edges.append((src, t))
            repeated.append(src)
            repeated.append(t)
    return DelayGraph.from_edges(n, edges, np.ones(n))


@dataclass(frozen=True)
class ConstantDelay:
    value: float


@dataclass(frozen=True)
class UniformIntDelay:
    lo: int
    hi: int
    step: int = 1


@dataclass(frozen=True)
class UniformRealDelay:
    lo: float
    hi: float


@dataclass(frozen=True)
class FileDelay:
    path: str


def parse_delay_scheme(text):
    """Parse a compact scheme spec, e.g. 'uniform_int:10:100:10'."""
    parts = text.split(":")
    kind, args = parts[0], parts[1:]
    try:
        if kind == "constant" and len(args) == 1:
            return ConstantDelay(float(args[0]))
        if kind == "uniform_int" and len(args) in (2, 3):
            step = int(args[2]) if len(args) == 3 else 1
            return UniformIntDelay(int(args[0]), int(args[1]), step)
        if kind == "uniform_real" and len(args) == 2:
            return UniformRealDelay(float(args[0]), float(args[1]))
        if kind == "file" and len(args) == 1:
            return FileDelay(args[0])
    except ValueError:
        pass
    raise GraphError(f"bad delay scheme {text!r}; expected constant:X, "
                     "uniform_int:LO:HI[:STEP], uniform_real:LO:HI or file:PATH")


def assign_delays(g, scheme, seed=42):
    """New graph with delays drawn per the scheme; reproducible per seed."""
    n = g.node_count
    rng = np.random.default_rng(seed)
    if isinstance(scheme, str):
        scheme = parse_delay_scheme(scheme)
    if isinstance(scheme, ConstantDelay):
        if scheme.value <= 0:
            raise GraphError("constant delay must be positive")
        delays = np.full(n, float(scheme.value))
    elif isinstance(scheme, UniformIntDelay):
        if scheme.lo <= 0 or scheme.step <= 0 or scheme.hi < scheme.lo:
            raise GraphError("uniform_int needs 0 < lo <= hi and step > 0")
        levels = (scheme.hi - scheme.lo) // scheme.step + 1
        delays = scheme.lo + scheme.step * rng.integers(0, levels, size=n)
        delays = delays.astype(np.float64)
    elif isinstance(scheme, UniformRealDelay):
        if scheme.lo <= 0 or scheme.hi < scheme.lo:
            raise GraphError("uniform_real needs 0 < lo <= hi")
        delays = rng.uniform(scheme.lo, scheme.hi, size=n)
    elif isinstance(scheme, FileDelay):
        lookup = {}
        for lineno, tokens in _read_tokens(scheme.path):
            if len(tokens) != 2:
                raise ParseError(scheme.path, lineno, "expected 'label value'")
            if tokens[0] in lookup:
                raise ParseError(scheme.path, lineno,
                                 f"duplicate delay entry for {tokens[0]!r}")
            lookup[tokens[0]] = float(tokens[1])
        try:
            delays = np.array([lookup[g.label_of(v)] for v in range(n)])
        except KeyError as exc:
            raise GraphError(f"delay file misses node {exc}")
    else:
        raise GraphError(f"unknown delay scheme {scheme!r}")
    return g.with_delays(delays)
