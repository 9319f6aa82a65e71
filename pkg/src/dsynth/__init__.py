"""Synchronous distributed games with imperfect information.

Strategies are finite decision structures, specifications are parity tree
automata, and winning is certified by annotations and progress measures.
"""
from .annotation import (AnnotatedStrategy, AnnotationError, NoWitness, annotate_tree,
                         annotate_truncation, check_annotation, find_witness_annotation,
                         is_witness)
from .dstates import DState, classify, compute_dstates, isomorphic, tree_level_sizes
from .game import (Diagnostic, GameSpec, MealyMachine, ParityTreeAutomaton,
                   ValidationError, indistinguishable, normalize_priorities, run_mealy,
                   validate_game, validate_spec)
from .progress import check_measure, compare_lex, compute_measure, edge_ok
from .retraction import (check_monotone, check_retraction, compact_all, compact_class,
                         compose, image, retract)
from .strategy import (DecisionStructure, NonUniform, check_strategy, compute_uniformity,
                       minimize, project_private, unravel)

__version__ = "0.1.0"

__all__ = [
    "AnnotatedStrategy", "AnnotationError", "DState", "DecisionStructure", "Diagnostic",
    "GameSpec", "MealyMachine", "NoWitness", "NonUniform", "ParityTreeAutomaton",
    "ValidationError", "annotate_tree", "annotate_truncation", "check_annotation",
    "check_measure", "check_monotone", "check_retraction", "check_strategy", "classify",
    "compact_all", "compact_class", "compare_lex", "compose", "compute_dstates",
    "compute_measure", "compute_uniformity", "edge_ok", "find_witness_annotation",
    "image", "indistinguishable", "is_witness", "isomorphic", "minimize",
    "normalize_priorities", "project_private", "retract", "run_mealy", "tree_level_sizes",
    "unravel", "validate_game", "validate_spec",
]
