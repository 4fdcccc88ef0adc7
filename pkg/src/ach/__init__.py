"""Adaptive culture heuristic for binary perceptron training.

A population of agents sits on an interaction graph, each holding a +-1
weight string for the same binary perceptron instance.  Agents repeatedly
copy single entries from neighbors whose cost (number of misclassified
patterns) is less than or equal to their own, until the population freezes
in a homogeneous state.  This package provides the problem instances
(ach.perceptron), the graphs (ach.topology), the dynamics (ach.engine), an
exhaustive ground-truth solver (ach.oracle) and a reproducible batch
experiment harness with a CLI (ach.harness, ach.cli).
"""

__version__ = "0.1.0"

from .engine import (EventRecord, Population, RunResult, init_population,
                     is_homogeneous, run_to_absorption, step)
from .harness import (CampaignConfig, CampaignResult, ConfigError, FitResult,
                      RowStats, estimate_pm, fit_exponential, fit_power_law,
                      fit_rows, read_results, run_campaign, scaling_collapse,
                      write_results)
from .oracle import OracleResult, exhaustive_min_cost
from .perceptron import (Mapping, apply_flip, compute_local_fields, cost,
                         generate_patterns, generate_random_mapping,
                         generate_teacher_mapping, mapping_from_json,
                         mapping_to_json, perceptron_output)
from .topology import (Graph, component_labels, neighbors,
                       random_regular_graph, square_lattice)

__all__ = [
    "Mapping", "apply_flip", "compute_local_fields", "cost",
    "generate_patterns", "generate_random_mapping", "generate_teacher_mapping",
    "mapping_from_json", "mapping_to_json", "perceptron_output",
    "Graph", "component_labels", "neighbors", "random_regular_graph",
    "square_lattice",
    "OracleResult", "exhaustive_min_cost",
    "EventRecord", "Population", "RunResult", "init_population",
    "is_homogeneous", "run_to_absorption", "step",
    "CampaignConfig", "CampaignResult", "ConfigError", "FitResult",
    "RowStats", "estimate_pm", "fit_exponential", "fit_power_law", "fit_rows",
    "read_results", "run_campaign", "scaling_collapse", "write_results",
    "__version__",
]
