"""Exact influence-diagram solver.

Models are directed acyclic diagrams of chance, decision and value
nodes.  Solving converts the diagram into a chance-only network and
finds, for every decision, the optimal deterministic policy over its
relevant information, by one of three exact backends (posterior queries,
decision-cluster collects, or a single rooted sweep) certified against a
brute-force oracle.
"""

from .errors import SolverError
from .factors import Factor
from .model import InfluenceDiagram, Variable, relevant_information, validate
from .policy_queries import DecisionRule, EvaluationResult, solve_by_queries
from .cluster_decision import (
    build_one_directional_tree,
    single_pass_solve,
    solve_by_clustering,
    solve_one_directional,
)
from .dp import solve_additive_decomposition, solve_product_decomposition
from .oracle import brute_solve, expected_value

__all__ = [
    "SolverError",
    "Factor",
    "InfluenceDiagram",
    "Variable",
    "relevant_information",
    "validate",
    "DecisionRule",
    "EvaluationResult",
    "solve_by_queries",
    "solve_by_clustering",
    "build_one_directional_tree",
    "single_pass_solve",
    "solve_one_directional",
    "solve_additive_decomposition",
    "solve_product_decomposition",
    "brute_solve",
    "expected_value",
]

__version__ = "1.0.0"
