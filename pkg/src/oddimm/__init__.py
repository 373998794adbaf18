"""Oddomorphisms, clique immersions, treewidth and homomorphism indistinguishability."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import Budget, BudgetExhausted, FormatError, GraphError
from .extract import (
    ExtractionResult,
    PipelineAssertionError,
    PipelineState,
    extract_clique_immersion,
    normalize,
    required_colours,
    run_extraction,
)
from .homcount import FamilyKind, FamilySpec, distinguish, generate_family, hom_count_bruteforce, hom_count_td
from .immersion import ImmersionWitness, find_immersion, lift_witness, verify_immersion
from .multigraph import EdgePath, MultiGraph, parse_graph, format_graph, read_graph, write_graph
from .oddmorph import (
    Homomorphism,
    ParityClass,
    VertexColouring,
    classify_vertex,
    merger,
    search_oddomorphism,
    verify_oddomorphism,
)
from .oplog import OperationLog
from .twidth import TreeDecomposition, check_oddomorphism_treewidth_bound, exact_treewidth, verify_tree_decomposition
from .verdict import Verdict

__all__ = [
    "Budget", "BudgetExhausted", "EdgePath", "ExtractionResult", "FamilyKind", "FamilySpec",
    "FormatError", "GraphError", "Homomorphism", "ImmersionWitness", "MultiGraph", "OperationLog",
    "ParityClass", "PipelineAssertionError", "PipelineState", "TreeDecomposition", "Verdict",
    "VertexColouring", "check_oddomorphism_treewidth_bound", "classify_vertex", "distinguish",
    "exact_treewidth", "extract_clique_immersion", "find_immersion", "format_graph",
    "generate_family", "hom_count_bruteforce", "hom_count_td", "lift_witness", "merger",
    "normalize", "parse_graph", "read_graph", "required_colours", "run_extraction",
    "search_oddomorphism", "verify_immersion", "verify_oddomorphism", "verify_tree_decomposition",
    "write_graph",
]
