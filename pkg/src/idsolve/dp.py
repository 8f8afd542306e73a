"""Solvers for separable value structures.

A diagram whose value decomposes into local tables combined by product
or sum is handled two ways: nonnegative product factors are each treated
like a likelihood and assigned independently to a covering cluster,
while additive structures are merged into a single value node up front
and handed to any standard backend.
"""

from __future__ import annotations

import numpy as np

from . import cluster_decision, policy_queries, transform
from .errors import NegativeFactor
from .model import InfluenceDiagram
from .policy_queries import EvaluationResult


def solve_product_decomposition(diagram: InfluenceDiagram) -> EvaluationResult:
    """Solve a product-combined diagram with each local value table kept
    as its own likelihood factor."""
    if diagram.combination != "product" and len(diagram.value_ids) > 1:
        raise ValueError("diagram does not declare a product combination")
    tables = [diagram.value_tables[v] for v in sorted(diagram.value_ids)]
    for table in tables:
        if np.any(table.values < 0):
            raise NegativeFactor("product-combined local values must be nonnegative")
    result = cluster_decision.solve_by_clustering(
        diagram, mode="likelihood", value_factors=tables
    )
    result.diagnostics["decomposition"] = "product"
    result.diagnostics["local_scopes"] = [list(t.scope) for t in tables]
    return result


def solve_additive_decomposition(
    diagram: InfluenceDiagram, backend: str = "queries"
) -> EvaluationResult:
    """Merge sum-combined local values into one node, then solve normally.

    The merged table's scope is the union of the local attribute sets —
    that widening is the price of merging and is reported in the
    diagnostics.
    """
    if diagram.combination != "sum" and len(diagram.value_ids) > 1:
        raise ValueError("diagram does not declare a sum combination")
    merged = transform.merge_values(diagram)
    merged_scope = next(iter(merged.value_tables.values())).scope
    if backend == "queries":
        result = policy_queries.solve_by_queries(diagram)
    elif backend == "cluster":
        result = cluster_decision.solve_by_clustering(diagram, mode="valuation")
    elif backend == "onedir":
        result = cluster_decision.solve_one_directional(diagram)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    result.diagnostics["decomposition"] = "sum"
    result.diagnostics["merged_value_scope"] = list(merged_scope)
    return result
