"""Median permutations under the Ulam metric: approximations, exact DP, oracles."""

from .exact_dp import RepairMode, dp_length_n_median, exact_median_3, median_m_dp, permutation_repair
from .median_approx import (
    CycleStrategy,
    MedianResult,
    best_from_input,
    build_majority_graph,
    relative_order,
    ulam_median_approx,
)
from .oracle import Space, brute_force_median, brute_force_ulam_bfs, ratio_report
from .perm_core import (
    CapExceededError,
    DimensionMismatchError,
    Metric,
    Permutation,
    SymbolString,
    edit_distance_indel,
    lcs_alignment,
    moved_set,
    objective,
    ulam_distance,
)
from .prob_model import ModelParams, SampleSet, generate, reconstruct

__version__ = "0.1.0"
