"""Incremental approximate clustering on weighted graphs under edge insertions.

The library keeps a small monotone candidate set and an assignment whose
cost stays within a constant factor of the best achievable, recomputing
only the layers an insertion actually disturbs.  A sparsifier plus a
weighted solver turn the candidate set into at most k centers after every
operation.
"""

from .exact import brute_force_opt, random_connected_graph, whp_trial_suite
from .graph import (DynGraph, Stream, StreamParseError, exact_distance,
                    insert_edge, new_graph, parse_stream, read_stream,
                    write_stream)
from .incremental import (BicriteriaState, check_invariants, current_solution,
                          handle_insertion, init_bicriteria,
                          sigma_change_feed, valid_radius)
from .kernels import BACKEND
from .params import ClusteringParams, ceil_frac, log2n
from .pipeline import Pipeline, end_to_end_step
from .powers import INF, is_on_grid, pow_index, pow_value, round_up_pow
from .reduction import (ReductionState, reduction_assignment_modifications,
                        reduction_edge_insertion)
from .spanner import SpannerState, spanner_decrease, spanner_init, spanner_restart
from .sssp import (DistanceOracle, oracle_extend_sources, oracle_init,
                   oracle_insert)
from .static_levels import (mu_star_bruteforce, nu_star, run_static,
                            smallest_covering_radius, static_cost)
from .streams import GENERATORS, gen_gnp, gen_pref_attach, gen_two_cluster
from .weighted import (InfeasibleInstance, Solution, WeightedInstance,
                       connect_components, instance_from_json,
                       instance_to_json, solve_static, value_wt)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BicriteriaState", "DistanceOracle", "DynGraph", "GENERATORS",
    "INF", "InfeasibleInstance", "ClusteringParams", "Pipeline", "ReductionState",
    "Solution", "SpannerState", "Stream", "StreamParseError",
    "WeightedInstance", "brute_force_opt", "ceil_frac", "check_invariants",
    "connect_components", "current_solution", "end_to_end_step",
    "exact_distance", "gen_gnp", "gen_pref_attach", "gen_two_cluster",
    "handle_insertion", "init_bicriteria", "insert_edge", "instance_from_json",
    "instance_to_json", "is_on_grid", "log2n", "mu_star_bruteforce",
    "new_graph", "nu_star", "oracle_extend_sources", "oracle_init",
    "oracle_insert", "parse_stream", "pow_index", "pow_value",
    "random_connected_graph", "read_stream", "reduction_assignment_modifications",
    "reduction_edge_insertion", "round_up_pow", "run_static",
    "sigma_change_feed", "smallest_covering_radius", "solve_static",
    "spanner_decrease", "spanner_init", "spanner_restart", "static_cost",
    "valid_radius", "value_wt", "whp_trial_suite", "write_stream",
]
