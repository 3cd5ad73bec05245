"""Community detection toolkit: a flexible triangle-aware quality function,
an immune-network optimizer over integer-encoded partitions, an overlap
promotion heuristic, NMI scoring for partitions and covers, and a benchmark
harness with a planted-partition generator."""

from .bench import ExperimentResult, GeneratorConfig, generate, run_experiment
from .fitness import (FlexParams, LocalBreakdown, Partition,
                      community_contribution, flex, flex_objective,
                      local_contribution, make_objective, modularity,
                      modularity_objective)
from .graph import (Graph, GraphParseError, TripleCounts,
                    clustering_coefficient, load_edge_list, load_gml,
                    neighbor_fraction, triples_of_node_in_set)
from .metrics import ConfusionTable, nmi_cover, nmi_disjoint
from .optimizer import (Cell, OptimizerConfig, RunResult, decode, encode,
                        hypermutate, mutation_budget, run, suppress)
from .overlap import Cover, OverlapThresholds, find_overlaps
from .presets import PRESETS, resolve_preset

__version__ = "0.1.0"
