"""Packing spanning arborescences in multi-digraphs.

Exact fractional packing numbers, branching-packing feasibility conditions,
certified packings of k spanning arborescences plus a large branching, and
extremal instances showing the packing bound is tight.
"""

from .branchings import Branching, branching_roots, is_branching
from .errors import ArborpackError, ContractError, HypothesisError, LoopError, SizeGuardError
from .feasibility import (
    BranchingSpec,
    Violation,
    check_k_plus_extra,
    check_pack_branching,
    check_spanning_arborescences,
)
from .graph import Arc, Digraph, Edge, Graph, contract, in_degree_set, induced
from .partitions import enumerate_subpartitions, gamma_f, hypothesis_holds, nu_f_digraph, nu_f_graph
from .solver import PackingCertificate, solve_exhaustive, solve_theorem7, verify_theorem7

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "ArborpackError",
    "Branching",
    "BranchingSpec",
    "ContractError",
    "Digraph",
    "Edge",
    "Graph",
    "HypothesisError",
    "LoopError",
    "PackingCertificate",
    "SizeGuardError",
    "Violation",
    "branching_roots",
    "check_k_plus_extra",
    "check_pack_branching",
    "check_spanning_arborescences",
    "contract",
    "enumerate_subpartitions",
    "gamma_f",
    "hypothesis_holds",
    "in_degree_set",
    "induced",
    "is_branching",
    "nu_f_digraph",
    "nu_f_graph",
    "solve_exhaustive",
    "solve_theorem7",
    "verify_theorem7",
]
