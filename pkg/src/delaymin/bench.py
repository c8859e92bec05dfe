"""Quality and efficiency harness: exact/sampled relative reduction,
long-path upper-bound comparison, and (algorithm x budget x seed) sweeps
with serialized result tables.
"""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass

import numpy as np

from . import baselines, graphio
from .exact import brute_force_optimal, greedy_gr
from .graph import GraphError, UpgradeState, distance_matrix, distance_rows, spd
from .pathcount import pcs_select
from .sampling import SamplingConfig, draw_pairs, exhaustive_pairs, gs_select

EXACT_RR_CAP = 2000


class SpecError(ValueError):
    """Invalid experiment specification; raised before any cell runs."""


def rr_exact(g, st, node_cap=EXACT_RR_CAP):
    """(SPD(empty) - SPD(st)) / SPD(empty), by full recomputation."""
    if g.node_count > node_cap:
        raise GraphError(f"exact RR refuses n={g.node_count} > cap={node_cap}; "
                         "use rr_sampled")
    base = spd(g)
    return (base - spd(g, st)) / base


def rr_sampled(g, st, pairs_per_trial, trials, seed):
    """Estimate RR from sampled pairs; returns (mean, stderr) over trials.

    Each trial reuses one pair draw for both the upgraded and baseline
    sums, which cancels much of the sampling noise.
    """
    if pairs_per_trial < 1 or trials < 2:
        raise GraphError("need pairs_per_trial >= 1 and trials >= 2")
    rng = np.random.default_rng(seed)
    estimates = []
    for _ in range(trials):
        sample = draw_pairs(g.node_count, pairs_per_trial, rng)
        sources = np.unique(sample.pairs[:, 0])
        idx = {int(s): i for i, s in enumerate(sources)}
        rows0 = distance_rows(g, None, sources)
        rows1 = distance_rows(g, st, sources)
        base = upgraded = 0.0
        for s, t in sample.pairs:
            base += rows0[idx[int(s)]][t]
            upgraded += rows1[idx[int(s)]][t]
        estimates.append(1.0 - upgraded / base)
    estimates = np.asarray(estimates)
    stderr = float(estimates.std(ddof=1) / np.sqrt(trials))
    return float(estimates.mean()), stderr


@dataclass(frozen=True)
class LongPathReport:
    """Upper-bound comparison on the restricted (long-path) metric."""

    ub: float                 # clipped absolute bound on the optimal reduction
    rr_star_pcs: float        # PCS's relative reduction of the restricted sum
    restricted_total: float
    ub_relative: float
    clipped: bool
    trial_reductions: tuple

    def __iter__(self):
        return iter((self.ub, self.rr_star_pcs))


def ub_longpath(g, k, kb, trials, seed, threshold=None, pcs_cfg=None):
    """Clipped k * mean random reduction vs the path-count sampler's RR*.

    ``threshold`` defaults to k (long means initial distance >= k).  The
    random baseline reduction is averaged over ``trials`` draws of kb
    distinct vertices; the bound is clipped at the restricted total.
    """
    if not g.is_uniform:
        raise GraphError("the long-path comparison is defined for unit delays")
    threshold = float(k) if threshold is None else float(threshold)
    d0 = distance_matrix(g)
    qual = d0 >= threshold
    np.fill_diagonal(qual, False)
    total = float(d0[qual].sum())
    if total <= 0:
        raise GraphError("no pair reaches the long-path threshold")

    rng = np.random.default_rng(seed)
    cfg = baselines.LongPathConfig(epsilon_len=threshold / g.node_count, kb=kb,
                                   trials=trials)
    reductions = []
    for _ in range(trials):
        nodes = baselines.select_longpath_random(g, cfg, rng)
        st = UpgradeState.of(g.node_count, nodes)
        reductions.append(total - float(distance_matrix(g, st)[qual].sum()))
    raw = k * float(np.mean(reductions))
    ub = min(total, raw)

    ledger = pcs_select(g, k, pcs_cfg or SamplingConfig(seed=seed))
    st = ledger.target_set(g.node_count)
    rr_star = (total - float(distance_matrix(g, st)[qual].sum())) / total
    return LongPathReport(ub=ub, rr_star_pcs=rr_star, restricted_total=total,
                          ub_relative=ub / total, clipped=raw > total,
                          trial_reductions=tuple(reductions))


@dataclass(frozen=True)
class AlgorithmSpec:
    algo: str
    config: dict = dataclasses.field(default_factory=dict)


@dataclass(frozen=True)
class ExperimentSpec:
    """One benchmark sweep: graph source x algorithms x budgets x seeds.

    Graph/delay generator seeds left unset derive from the cell seed, so
    each seed runs a fresh instance; fixed seeds pin one instance.
    """

    graph: dict
    algorithms: tuple
    budgets: tuple
    seeds: tuple
    delays: dict | None = None
    rr_mode: str = "exact"            # or "sampled"
    rr_pairs: int = 1000
    rr_trials: int = 10
    rr_star_threshold: float | None = None

    @classmethod
    def from_dict(cls, data):
        try:
            algos = tuple(AlgorithmSpec(a["algo"],
                                        {k: v for k, v in a.items() if k != "algo"})
                          for a in data["algorithms"])
            spec = cls(graph=dict(data["graph"]),
                       algorithms=algos,
                       budgets=tuple(int(k) for k in data["budgets"]),
                       seeds=tuple(int(s) for s in data.get("seeds", [42])),
                       delays=dict(data["delays"]) if "delays" in data else None,
                       rr_mode=data.get("rr", {}).get("mode", "exact"),
                       rr_pairs=int(data.get("rr", {}).get("pairs", 1000)),
                       rr_trials=int(data.get("rr", {}).get("trials", 10)),
                       rr_star_threshold=data.get("rr_star_threshold"))
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError(f"malformed experiment spec: {exc}")
        for a in spec.algorithms:
            if a.algo not in ALGORITHMS:
                raise SpecError(f"unknown algorithm tag {a.algo!r}; "
                                f"known: {sorted(ALGORITHMS)}")
        if spec.rr_mode not in ("exact", "sampled"):
            raise SpecError(f"unknown rr mode {spec.rr_mode!r}")
        if any(k < 1 for k in spec.budgets):
            raise SpecError("budgets must be positive")
        return spec


@dataclass
class ResultRow:
    algorithm: str
    k: int
    seed: int
    rr: float | None
    rr_stderr: float | None = None
    rr_star: float | None = None
    time_ms: float | None = None
    samples: int | None = None
    error: str | None = None


def _sampling_config(config, seed):
    return SamplingConfig(
        epsilon=config.get("epsilon"),
        c_factor=config.get("c"),
        explicit_p=config.get("p"),
        seed=seed,
        resample_each_iteration=config.get("resample"),
        threads=int(config.get("threads", 1)))


def _run_ledger(select, g, k, cfg, config):
    pairs = exhaustive_pairs(g.node_count) if config.get("exhaustive") else None
    ledger = select(g, k, cfg, pairs=pairs)
    samples = pairs.size if pairs is not None else None
    return ledger.nodes, samples


def _algo_brute(g, k, seed, config):
    nodes, _ = brute_force_optimal(g, k)
    return nodes, None


def _algo_gr(g, k, seed, config):
    return greedy_gr(g, k).nodes, None


def _algo_gs(g, k, seed, config):
    return _run_ledger(gs_select, g, k, _sampling_config(config, seed), config)


def _algo_pcs(g, k, seed, config):
    return _run_ledger(pcs_select, g, k, _sampling_config(config, seed), config)


def _algo_random(g, k, seed, config):
    return baselines.select_random(g, k, seed), None


def _algo_degree(g, k, seed, config):
    return baselines.select_degree(g, k), None


def _algo_highdelay(g, k, seed, config):
    return baselines.select_high_delay(g, k), None


def _algo_pathcen(g, k, seed, config):
    return baselines.select_path_centrality(g, k, iterative=False), None


def _algo_itpathcen(g, k, seed, config):
    return baselines.select_path_centrality(g, k, iterative=True), None


def _algo_longpath_random(g, k, seed, config):
    cfg = baselines.LongPathConfig(
        epsilon_len=float(config.get("epsilon_len", k / g.node_count)),
        kb=int(config.get("kb", k)))
    return baselines.select_longpath_random(g, cfg, seed), None


ALGORITHMS = {
    "brute": _algo_brute,
    "gr": _algo_gr,
    "gs": _algo_gs,
    "pcs": _algo_pcs,
    "random": _algo_random,
    "degree": _algo_degree,
    "highdelay": _algo_highdelay,
    "pathcen": _algo_pathcen,
    "itpathcen": _algo_itpathcen,
    "longpath-random": _algo_longpath_random,
}


def build_graph(graph_spec, delay_spec=None, cell_seed=42):
    """Materialize a graph from a bench spec; unseeded generators derive
    their seed from the cell seed."""
    kind = graph_spec.get("source", "generator" if "generator" in graph_spec else "file")
    if kind == "generator" or "generator" in graph_spec:
        if graph_spec.get("generator") != "ba":
            raise SpecError(f"unknown generator {graph_spec.get('generator')!r}")
        seed = graph_spec.get("seed")
        g = graphio.generate_ba(graphio.BaSpec(
            n=int(graph_spec["n"]),
            edges_per_node=int(graph_spec["edges_per_node"]),
            seed=int(seed) if seed is not None else cell_seed))
    else:
        g = graphio.load_graph(graphio.GraphFileSpec(
            edge_path=graph_spec["edges"],
            delay_path=graph_spec.get("delays"),
            default_delay=float(graph_spec.get("default_delay", 1.0)),
            label_mode=graph_spec.get("label_mode", "string")))
    if delay_spec is not None:
        kind = delay_spec["scheme"]
        if kind == "constant":
            scheme = graphio.ConstantDelay(float(delay_spec["value"]))
        elif kind == "uniform_int":
            scheme = graphio.UniformIntDelay(int(delay_spec["lo"]), int(delay_spec["hi"]),
                                             int(delay_spec.get("step", 1)))
        elif kind == "uniform_real":
            scheme = graphio.UniformRealDelay(float(delay_spec["lo"]), float(delay_spec["hi"]))
        elif kind == "file":
            scheme = graphio.FileDelay(delay_spec["path"])
        else:
            raise SpecError(f"unknown delay scheme {kind!r}")
        seed = delay_spec.get("seed")
        g = graphio.assign_delays(g, scheme,
                                  seed=int(seed) if seed is not None else cell_seed + 1000003)
    return g


def run_experiment(spec):
    """Execute every (algorithm, k, seed) cell; failures become error rows.

    Timing covers selection only.  Rows come back ordered by
    (algorithm, budget, seed).
    """
    if isinstance(spec, dict):
        spec = ExperimentSpec.from_dict(spec)
    graphs = {}
    for seed in spec.seeds:
        graphs[seed] = build_graph(spec.graph, spec.delays, cell_seed=seed)
        if spec.rr_mode == "exact" and graphs[seed].node_count > EXACT_RR_CAP:
            raise SpecError(f"exact rr mode needs n <= {EXACT_RR_CAP}; "
                            "switch to sampled")
    rows = []
    for algo in spec.algorithms:
        runner = ALGORITHMS[algo.algo]
        for k in spec.budgets:
            for seed in spec.seeds:
                g = graphs[seed]
                row = ResultRow(algorithm=algo.algo, k=k, seed=seed, rr=None)
                try:
                    t0 = time.perf_counter()
                    nodes, samples = runner(g, k, seed, algo.config)
                    row.time_ms = (time.perf_counter() - t0) * 1000.0
                    row.samples = samples
                    st = UpgradeState.of(g.node_count, nodes)
                    if spec.rr_mode == "exact":
                        row.rr = rr_exact(g, st)
                    else:
                        row.rr, row.rr_stderr = rr_sampled(
                            g, st, spec.rr_pairs, spec.rr_trials, seed)
                    if spec.rr_star_threshold is not None:
                        total = baselines.restricted_spd(g, None, spec.rr_star_threshold)
                        left = baselines.restricted_spd(g, st, spec.rr_star_threshold)
                        row.rr_star = (total - left) / total
                except Exception as exc:  # noqa: BLE001 - cell isolation
                    row.error = f"{type(exc).__name__}: {exc}"
                rows.append(row)
    return rows


TABLE_COLUMNS = ("algorithm", "k", "seed", "rr", "rr_stderr", "rr_star",
                 "time_ms", "samples")


def rows_to_jsonl(rows, path):
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(dataclasses.asdict(row), sort_keys=True) + "\n")


def rows_from_jsonl(path):
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rows.append(ResultRow(**json.loads(line)))
    return rows


def rows_to_table(rows, path):
    """Flat long-format table, one header row, tab-separated."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(TABLE_COLUMNS) + "\n")
        for row in rows:
            record = dataclasses.asdict(row)
            fh.write("\t".join("" if record[c] is None else repr(record[c])
                               if isinstance(record[c], float) else str(record[c])
                               for c in TABLE_COLUMNS) + "\n")


def summarize(rows):
    """Mean rr per (algorithm, k) over seeds, skipping error rows."""
    groups = {}
    for row in rows:
        if row.error is None and row.rr is not None:
            groups.setdefault((row.algorithm, row.k), []).append(row.rr)
    return {key: float(np.mean(vals)) for key, vals in sorted(groups.items())}
