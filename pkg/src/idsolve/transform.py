"""Conversions from influence diagrams to the networks the backends consume.

Decisions become chance nodes with uniform priors over their relevant
information; the value node becomes a synthetic binary variable, either
rescaled to a probability (Utility) or kept in original units as a
valuation (Value).  Separable value structures are merged into a single
value node first.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from . import model
from .errors import DegenerateValue, InvalidDiagram, NegativeFactor
from .factors import Factor, PROBABILITY, VALUATION
from .model import CHANCE, DECISION, VALUE, InfluenceDiagram, Variable

MERGED_VALUE_ID = "__merged_value__"


@dataclass(frozen=True)
class DecisionSpec:
    """How a decision appears inside a converted network."""

    id: str
    alternatives: tuple[str, ...]
    scope: tuple[str, ...]  # relevant information, the policy domain
    information: tuple[str, ...]  # full non-evidence information set


@dataclass(frozen=True)
class DecisionNetwork:
    """Chance-only network produced from an influence diagram.

    ``synthetic_variable`` is the binary node standing in for the value
    function; its CPT row for outcome 1 is the (possibly rescaled) value
    table.  ``value_factor`` is the raw value table over the attributes,
    kept for the treat-value-as-likelihood evaluation route.
    """

    variables: tuple[Variable, ...]
    arcs: tuple[tuple[str, str], ...]
    cpts: Mapping[str, Factor]
    synthetic_variable: str
    scale: tuple[float, float]
    decisions: tuple[DecisionSpec, ...]
    evidence: Mapping[str, int]
    value_factor: Factor

    def __post_init__(self):
        object.__setattr__(self, "cpts", dict(self.cpts))
        object.__setattr__(self, "evidence", dict(self.evidence))

    def variable(self, var_id: str) -> Variable:
        for variable in self.variables:
            if variable.id == var_id:
                return variable
        raise KeyError(var_id)

    def cardinality(self, var_id: str) -> int:
        return self.variable(var_id).cardinality

    def parents(self, var_id: str) -> tuple[str, ...]:
        return tuple(p for p, c in self.arcs if c == var_id)

    @property
    def cards(self) -> dict[str, int]:
        return {v.id: v.cardinality for v in self.variables}

    def with_cpt(self, var_id: str, cpt: Factor) -> "DecisionNetwork":
        cpts = dict(self.cpts)
        cpts[var_id] = cpt
        return replace(self, cpts=cpts)


class BeliefNetwork(DecisionNetwork):
    """Rescaled variant: the synthetic Utility node is a true probability."""


class ValuationNetwork(DecisionNetwork):
    """Unrescaled variant: the synthetic Value node carries a valuation."""


def merge_values(diagram: InfluenceDiagram) -> InfluenceDiagram:
    """Collapse a separable (sum or product) value structure into one node."""
    if len(diagram.value_ids) <= 1 and diagram.combination == "none":
        return diagram
    tables = [diagram.value_tables[v] for v in sorted(diagram.value_ids)]
    if diagram.combination == "product":
        for table in tables:
            if np.any(table.values < 0):
                raise NegativeFactor(
                    "product-combined local values must be nonnegative"
                )
        merged = tables[0]
        for table in tables[1:]:
            merged = merged.multiply(table)
    elif diagram.combination == "sum":
        merged = tables[0]
        for table in tables[1:]:
            merged = merged.add(table)
    else:
        return diagram

    attributes = merged.scope
    variables = tuple(
        v for v in diagram.variables if v.kind != VALUE
    ) + (Variable(MERGED_VALUE_ID, VALUE),)
    arcs = tuple(
        (p, c) for p, c in diagram.arcs if c not in diagram.value_ids
    ) + tuple((a, MERGED_VALUE_ID) for a in attributes)
    return InfluenceDiagram(
        variables=variables,
        arcs=arcs,
        cpts=diagram.cpts,
        value_tables={MERGED_VALUE_ID: merged},
        combination="none",
        decision_order=diagram.decision_order,
        evidence=diagram.evidence,
    )


def value_scale(diagram: InfluenceDiagram) -> tuple[float, float]:
    """(v_min, v_max) of the combined value function."""
    merged = merge_values(diagram)
    table = next(iter(merged.value_tables.values()))
    return float(table.values.min()), float(table.values.max())


def _prepare(diagram, use_full_information, prune_barren, check):
    if check:
        report = model.validate(diagram)
        if not report.ok:
            raise InvalidDiagram(report)
    prepared = merge_values(diagram)
    if prune_barren:
        targets = set(prepared.value_ids)
        prepared = model.prune(prepared, targets)
    specs = []
    for decision in prepared.decision_order:
        info = prepared.information_set(decision)
        if use_full_information:
            scope = info
        else:
            scope = model.relevant_information(prepared, decision)
        specs.append(
            DecisionSpec(
                id=decision,
                alternatives=prepared.variable(decision).outcomes,
                scope=scope,
                information=info,
            )
        )
    value_id = prepared.value_ids[0] if prepared.value_ids else None
    value_table = prepared.value_tables[value_id] if value_id else Factor((), 0.0)
    return prepared, tuple(specs), value_table


def _uniform_cpt(decision: str, spec: DecisionSpec, diagram) -> Factor:
    cards = tuple(diagram.cardinality(v) for v in spec.scope)
    n = len(spec.alternatives)
    values = np.full(cards + (n,), 1.0 / n)
    return Factor(spec.scope + (decision,), values, PROBABILITY)


def _convert(diagram, specs, synthetic_id, synthetic_cpt, scale, value_table, cls):
    variables = []
    arcs: list[tuple[str, str]] = []
    cpts: dict[str, Factor] = {}
    for variable in diagram.variables:
        if variable.kind == VALUE:
            continue
        if variable.kind == DECISION:
            spec = next(s for s in specs if s.id == variable.id)
            variables.append(replace(variable, kind=CHANCE))
            arcs.extend((p, variable.id) for p in spec.scope)
            cpts[variable.id] = _uniform_cpt(variable.id, spec, diagram)
        else:
            variables.append(variable)
            arcs.extend((p, variable.id) for p in diagram.parents(variable.id))
            cpts[variable.id] = diagram.cpts[variable.id]
    variables.append(Variable(synthetic_id, CHANCE, ("0", "1")))
    arcs.extend((a, synthetic_id) for a in value_table.scope)
    cpts[synthetic_id] = synthetic_cpt
    return cls(
        variables=tuple(variables),
        arcs=tuple(arcs),
        cpts=cpts,
        synthetic_variable=synthetic_id,
        scale=scale,
        decisions=specs,
        evidence=diagram.evidence,
        value_factor=value_table,
    )


def to_belief_network(
    diagram: InfluenceDiagram,
    use_full_information: bool = False,
    prune_barren: bool = True,
    check: bool = True,
) -> BeliefNetwork:
    """Rescale the value into a binary Utility node with P{U=1|a} = u(a)."""
    prepared, specs, value_table = _prepare(
        diagram, use_full_information, prune_barren, check
    )
    v_min = float(value_table.values.min())
    v_max = float(value_table.values.max())
    if v_max == v_min:
        raise DegenerateValue(v_min)
    u = (value_table.values - v_min) / (v_max - v_min)
    cpt = Factor(
        value_table.scope + ("__utility__",),
        np.stack([1.0 - u, u], axis=-1),
        PROBABILITY,
    )
    return _convert(
        prepared, specs, "__utility__", cpt, (v_min, v_max), value_table, BeliefNetwork
    )


def to_valuation_network(
    diagram: InfluenceDiagram,
    use_full_information: bool = False,
    prune_barren: bool = True,
    check: bool = True,
) -> ValuationNetwork:
    """Keep original units: V{V=1|a} = v(a), V{V=0|a} = 1."""
    prepared, specs, value_table = _prepare(
        diagram, use_full_information, prune_barren, check
    )
    v_min = float(value_table.values.min())
    v_max = float(value_table.values.max())
    table = Factor(
        value_table.scope + ("__value__",),
        np.stack([np.ones_like(value_table.values), value_table.values], axis=-1),
        VALUATION,
    )
    return _convert(
        prepared, specs, "__value__", table, (v_min, v_max), value_table, ValuationNetwork
    )
