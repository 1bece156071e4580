"""Whittle-index user association toolkit for jamming-prone multi-BS networks."""

from .model import (BsParams, NetworkConfig, departure_pmf, stability_margin,
                    transition_kernels)
from .policies import POLICY_NAMES, AllBlockedError, PolicyKind, decide
from .sim import SimMetrics, jfi, run
from .solver import (ThresholdPolicy, ValueSolution, advantage_h,
                     average_cost_f, evaluate_threshold, greedy_policy,
                     rvi_solve, stationary_distribution)
from .whittle import (IndexIterConfig, WhittleTable, build_table,
                      index_bisection, index_iterative, write_table_csv)

__all__ = [
    "BsParams", "NetworkConfig", "departure_pmf", "transition_kernels",
    "stability_margin", "ValueSolution", "ThresholdPolicy", "rvi_solve",
    "greedy_policy", "evaluate_threshold", "stationary_distribution",
    "average_cost_f", "advantage_h", "IndexIterConfig", "WhittleTable",
    "index_iterative", "index_bisection", "build_table", "write_table_csv",
    "PolicyKind", "POLICY_NAMES", "AllBlockedError", "decide",
    "SimMetrics", "run", "jfi",
]

__version__ = "0.1.0"
