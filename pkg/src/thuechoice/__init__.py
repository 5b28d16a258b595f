"""Nonrepetitive list colourings of trees of bounded pathwidth."""

from .decomposition import (
    PathDecomposition,
    PathPartition,
    build_path_partition,
    classify_ascending,
    edge_kind,
    level,
    tree_pathwidth_exact,
    validate_path_decomposition,
)
from .graph_core import PlaneArborescence, Tree, dfs_left_to_right, enumerate_paths, rightmost_path, up_set
from .greedy import greedy_color, guards, pipeline
from .logs import MLog, audit_log_bounds, decode_dprime, decode_log, encode_dprime, record_mlog
from .pw2 import build_gnl, certify_lower_bound_small, count_witness_bounds, find_repetition_or_witnesses
from .repetition import (
    ListAssignment,
    SublistAssignment,
    brute_force_list_coloring,
    exists_bad_coloring_shape,
    find_near_repetition,
    find_repetition,
    is_phi_bad_ascending,
    is_phi_bad_directed,
    verify_nonrepetitive,
)
from .sequence_game import run_game, step
from .subsets import rank_subset, unrank_subset
from .sublist_solver import (
    SolverConfig,
    find_bad_path,
    find_valid_extension,
    paper_b,
    paper_f,
    run_algorithm1,
    thin_lists,
    to_arborescences,
)

__version__ = "0.1.0"
