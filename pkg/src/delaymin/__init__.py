"""delaymin: budgeted node upgrades minimizing all-pairs shortest-path delay.

Given an undirected graph with positive per-node delays (a path pays every
vertex except its destination) and a budget k, pick k nodes whose delay
reset to zero shrinks the sum of all-ordered-pairs shortest-path delays
the most.  Provides exact solvers (brute force, exhaustive greedy), two
sampling algorithms with provable per-step error bounds (pair-sampling
greedy for arbitrary delays, path-count sampling for unit delays),
baseline selectors, and a benchmark harness.
"""

from .baselines import (LongPathConfig, epsilon_net_size, restricted_spd,
                        select_degree, select_high_delay,
                        select_longpath_random, select_path_centrality,
                        select_random)
from .bench import (ExperimentSpec, LongPathReport, ResultRow, rr_exact,
                    rr_sampled, run_experiment, ub_longpath)
from .exact import (ReductionLedger, ReductionStep, brute_force_optimal,
                    greedy_gr, rs_of_vertex)
from .graph import (DelayGraph, DistanceField, GraphError, GraphStats,
                    UpgradeState, collapse_zero_delay, distance_matrix,
                    effective_delay, effective_delays, graph_stats, spd, sssp)
from .graphio import (BaSpec, GraphFileSpec, assign_delays, generate_ba,
                      load_graph, parse_delay_scheme, save_graph)
from .pathcount import (EditedGraph, PathCountTally, exact_zeta,
                        membership_bfs, pcs_select, sample_size_uniform,
                        tally_paths, verify_pathcount_identity)
from .sampling import (PairSample, SamplingConfig, draw_pairs,
                       exhaustive_pairs, gs_select, pair_scores,
                       practical_sample_size, sample_size_general,
                       sample_size_smallworld)

__version__ = "0.1.0"

__all__ = [
    "BaSpec", "DelayGraph", "DistanceField", "EditedGraph", "ExperimentSpec",
    "GraphError", "GraphFileSpec", "GraphStats", "LongPathConfig",
    "LongPathReport", "PairSample", "PathCountTally", "ReductionLedger",
    "ReductionStep", "ResultRow", "SamplingConfig", "UpgradeState",
    "assign_delays", "brute_force_optimal", "collapse_zero_delay",
    "distance_matrix", "draw_pairs", "effective_delay", "effective_delays",
    "epsilon_net_size", "exact_zeta", "exhaustive_pairs", "generate_ba",
    "graph_stats", "greedy_gr", "gs_select", "load_graph", "membership_bfs",
    "pair_scores", "parse_delay_scheme", "pcs_select",
    "practical_sample_size", "restricted_spd", "rr_exact", "rr_sampled",
    "rs_of_vertex", "run_experiment", "sample_size_general",
    "sample_size_smallworld", "sample_size_uniform", "save_graph",
    "select_degree", "select_high_delay", "select_longpath_random",
    "select_path_centrality", "select_random", "spd", "sssp", "tally_paths",
    "ub_longpath", "verify_pathcount_identity",
]
