"""Influence-diagram data model and graph analysis.

A diagram is an immutable DAG of chance, decision and value variables.
Chance variables carry conditional probability tables; value variables
carry real-valued tables over their parents (the value attributes);
decisions carry only an alternative list.  Structural queries
(d-separation, relevant information, pruning) are pure functions over the
diagram.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

import networkx as nx
import numpy as np

from .errors import NotADecision, UnknownVariable
from .factors import Factor

CHANCE = "chance"
DECISION = "decision"
VALUE = "value"

CPT_TOL = 1e-9


@dataclass(frozen=True)
class Variable:
    id: str
    kind: str
    outcomes: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        if not self.name:
            object.__setattr__(self, "name", self.id)

    @property
    def cardinality(self) -> int:
        return len(self.outcomes)


@dataclass(frozen=True)
class InfluenceDiagram:
    """Typed decision DAG.

    ``cpts`` maps each chance variable to a factor over parents + (var,)
    with the variable's own axis last; rows over that axis sum to one.
    ``value_tables`` maps each value variable to a factor over its
    parents.  ``combination`` is "none", "sum" or "product" and governs
    how multiple value nodes combine.  ``evidence`` maps observed chance
    variables to outcome indices.
    """

    variables: tuple[Variable, ...]
    arcs: tuple[tuple[str, str], ...]
    cpts: Mapping[str, Factor]
    value_tables: Mapping[str, Factor]
    combination: str = "none"
    decision_order: tuple[str, ...] = ()
    evidence: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "arcs", tuple((p, c) for p, c in self.arcs))
        object.__setattr__(self, "cpts", dict(self.cpts))
        object.__setattr__(self, "value_tables", dict(self.value_tables))
        object.__setattr__(self, "decision_order", tuple(self.decision_order))
        object.__setattr__(self, "evidence", dict(self.evidence))

    # -- lookups -------------------------------------------------------

    def variable(self, var_id: str) -> Variable:
        for variable in self.variables:
            if variable.id == var_id:
                return variable
        raise UnknownVariable(var_id)

    def has(self, var_id: str) -> bool:
        return any(v.id == var_id for v in self.variables)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.variables)

    @property
    def chance_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.variables if v.kind == CHANCE)

    @property
    def decision_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.variables if v.kind == DECISION)

    @property
    def value_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.variables if v.kind == VALUE)

    def parents(self, var_id: str) -> tuple[str, ...]:
        return tuple(p for p, c in self.arcs if c == var_id)

    def children(self, var_id: str) -> tuple[str, ...]:
        return tuple(c for p, c in self.arcs if p == var_id)

    def information_set(self, decision: str) -> tuple[str, ...]:
        """Non-evidence variables observed when the decision is made."""
        return tuple(p for p in self.parents(decision) if p not in self.evidence)

    def cardinality(self, var_id: str) -> int:
        return self.variable(var_id).cardinality

    def digraph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.ids)
        graph.add_edges_from(self.arcs)
        return graph


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[tuple[str, str, tuple[str, ...]], ...] = ()
    warnings: tuple[tuple[str, str, tuple[str, ...]], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors


def validate(diagram: InfluenceDiagram) -> ValidationReport:
    """Check every structural invariant; violations are reported, not raised."""
    errors: list[tuple[str, str, tuple[str, ...]]] = []
    warnings: list[tuple[str, str, tuple[str, ...]]] = []

    def err(code, message, *ids):
        errors.append((code, message, tuple(ids)))

    ids = [v.id for v in diagram.variables]
    known = set(ids)
    if len(known) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        err("DUPLICATE_VARIABLE", "variable ids are not unique", *dupes)

    for variable in diagram.variables:
        if variable.kind not in (CHANCE, DECISION, VALUE):
            err("BAD_KIND", f"unknown kind {variable.kind!r}", variable.id)
            continue
        if variable.kind == VALUE:
            if variable.outcomes:
                err("VALUE_OUTCOMES", "value variables carry no outcome list", variable.id)
        else:
            if variable.cardinality < 1:
                err("EMPTY_OUTCOMES", "at least one outcome required", variable.id)
            if len(set(variable.outcomes)) != len(variable.outcomes):
                err("DUPLICATE_OUTCOME", "outcome labels must be unique", variable.id)

    for parent, child in diagram.arcs:
        for end in (parent, child):
            if end not in known:
                err("UNKNOWN_VARIABLE", f"arc ({parent}, {child}) references {end}", end)

    graph = diagram.digraph()
    if not nx.is_directed_acyclic_graph(graph):
        cycle = [u for u, _ in nx.find_cycle(graph)]
        err("CYCLE", "arc set contains a cycle", *cycle)
        return ValidationReport(tuple(errors), tuple(warnings))

    # CPT coverage, scope and normalization.
    for variable in diagram.variables:
        if variable.kind != CHANCE:
            continue
        cpt = diagram.cpts.get(variable.id)
        if cpt is None:
            err("MISSING_CPT", "chance variable has no CPT", variable.id)
            continue
        family = set(diagram.parents(variable.id)) | {variable.id}
        if set(cpt.scope) != family or cpt.scope[-1] != variable.id:
            err(
                "CPT_SCOPE",
                f"CPT scope {cpt.scope} must be parents + ({variable.id},)",
                variable.id,
            )
            continue
        if np.any(cpt.values < 0):
            err("NEGATIVE_PROBABILITY", "CPT entries must be nonnegative", variable.id)
        rows = cpt.values.sum(axis=-1)
        if np.any(np.abs(rows - 1.0) > CPT_TOL):
            err("CPT_NOT_NORMALIZED", "CPT rows must sum to 1", variable.id)

    # Value nodes: table over parents, childless, combination tag.
    value_ids = diagram.value_ids
    for value_id in value_ids:
        table = diagram.value_tables.get(value_id)
        if table is None:
            err("MISSING_VALUE_TABLE", "value variable has no table", value_id)
        elif set(table.scope) != set(diagram.parents(value_id)):
            err(
                "VALUE_TABLE_SCOPE",
                f"value table scope {table.scope} must equal the parent set",
                value_id,
            )
        if diagram.children(value_id):
            err("VALUE_HAS_CHILD", "value variables must be sinks", value_id)
    if len(value_ids) > 1 and diagram.combination not in ("sum", "product"):
        err(
            "MULTIPLE_VALUES",
            "several value nodes require a sum or product combination tag",
            *value_ids,
        )
    if diagram.combination not in ("none", "sum", "product"):
        err("BAD_COMBINATION", f"unknown combination {diagram.combination!r}")

    # Decision ordering and no-forgetting.
    decisions = set(diagram.decision_ids)
    if set(diagram.decision_order) != decisions or len(diagram.decision_order) != len(decisions):
        err(
            "DECISION_ORDER",
            "decision_order must list every decision exactly once",
            *sorted(decisions ^ set(diagram.decision_order)),
        )
    else:
        position = {d: i for i, d in enumerate(diagram.decision_order)}
        for later, earlier in ((a, b) for a in decisions for b in decisions if a != b):
            if position[later] < position[earlier]:
                continue
            if nx.has_path(graph, later, earlier):
                err(
                    "DECISION_ORDER",
                    f"{later} precedes {earlier} in the DAG but follows it in decision_order",
                    later,
                    earlier,
                )
        for i, early in enumerate(diagram.decision_order):
            remembered = set(diagram.parents(early)) | {early}
            for late in diagram.decision_order[i + 1 :]:
                missing = remembered - set(diagram.parents(late))
                if missing:
                    err(
                        "NO_FORGETTING",
                        f"{late} forgets {sorted(missing)} known at {early}",
                        late,
                        *sorted(missing),
                    )

    for var, index in diagram.evidence.items():
        if var not in known:
            err("UNKNOWN_VARIABLE", f"evidence on unknown variable {var}", var)
        elif diagram.variable(var).kind != CHANCE:
            err("EVIDENCE_NOT_CHANCE", "evidence must be on chance variables", var)
        elif not 0 <= index < diagram.cardinality(var):
            err("EVIDENCE_INDEX", f"observed index {index} out of range", var)
        else:
            # Evidence below a decision makes P{E=e} depend on the policy;
            # per-information-state optimization then no longer maximizes
            # the conditional expectation.
            for decision in diagram.decision_order:
                if nx.has_path(graph, decision, var):
                    warnings.append(
                        (
                            "EVIDENCE_BELOW_DECISION",
                            f"evidence {var} is downstream of decision {decision}",
                            (var, decision),
                        )
                    )
                    break

    return ValidationReport(tuple(errors), tuple(warnings))


def complete_memory_arcs(diagram: InfluenceDiagram) -> InfluenceDiagram:
    """Add the arcs no-forgetting presumes: each decision and its parents
    become parents of every later decision."""
    arcs = list(diagram.arcs)
    present = set(arcs)
    for i, early in enumerate(diagram.decision_order):
        remembered = set(diagram.parents(early)) | {early}
        for late in diagram.decision_order[i + 1 :]:
            for var in sorted(remembered):
                if (var, late) not in present:
                    arcs.append((var, late))
                    present.add((var, late))
    return replace(diagram, arcs=tuple(arcs))


# -- d-separation -----------------------------------------------------


def _d_separated_sets(
    graph: nx.DiGraph, xs: set[str], ys: set[str], given: set[str]
) -> bool:
    xs, ys = xs - given, ys - given
    if not xs or not ys:
        return True
    if xs & ys:
        return False
    return nx.is_d_separator(graph, xs, ys, given)


def d_separated(
    diagram: InfluenceDiagram, x: str, y: str, given: Iterable[str] = ()
) -> bool:
    """Standard d-separation on the diagram's DAG; value nodes are plain sinks."""
    given = set(given)
    for var in {x, y} | given:
        if not diagram.has(var):
            raise UnknownVariable(var)
    return _d_separated_sets(diagram.digraph(), {x}, {y}, given)


def relevant_information(diagram: InfluenceDiagram, decision: str) -> tuple[str, ...]:
    """Subset of the decision's information set needed for an optimal policy.

    Computed backward over the decision order: when analysing a decision,
    every later decision has already been replaced by a policy node whose
    parents are its own relevant information, matching backward
    evaluation.  Evidence variables are excluded from the result and
    always conditioned on.
    """
    if not diagram.has(decision):
        raise UnknownVariable(decision)
    if diagram.variable(decision).kind != DECISION:
        raise NotADecision(decision)
    return relevant_information_sets(diagram)[decision]


def relevant_information_sets(
    diagram: InfluenceDiagram,
) -> dict[str, tuple[str, ...]]:
    """Relevant information for every decision, computed back to front."""
    graph = diagram.digraph()
    evidence = set(diagram.evidence)
    values = set(diagram.value_ids)
    result: dict[str, tuple[str, ...]] = {}
    for decision in reversed(diagram.decision_order):
        info = list(diagram.information_set(decision))

        # Value nodes that can still depend on the decision given its
        # information (the policy-relevant value set).
        dependent_values = {
            v
            for v in values
            if not _d_separated_sets(graph, {decision}, {v}, set(info) | evidence)
        }
        relevant = set(info) if dependent_values else set()
        changed = bool(relevant)
        while changed:
            changed = False
            for var in sorted(relevant):
                conditioning = {decision} | (relevant - {var}) | evidence
                if _d_separated_sets(graph, {var}, dependent_values, conditioning):
                    relevant.discard(var)
                    changed = True
        scope = tuple(v for v in info if v in relevant)
        result[decision] = scope
        # Replace this decision's informational arcs by its policy arcs
        # before analysing earlier decisions.
        graph.remove_edges_from([(p, decision) for p in list(graph.predecessors(decision))])
        graph.add_edges_from([(p, decision) for p in scope])
    return result


def prune(diagram: InfluenceDiagram, targets: Iterable[str]) -> InfluenceDiagram:
    """Remove barren nodes and chance nodes irrelevant to the targets.

    Barren nodes (childless non-target, non-evidence chance or decision
    nodes) are removed iteratively.  Beyond that, unobserved chance nodes
    d-separated from every target given the evidence are removed together
    with their retained chance descendants (which are then d-separated
    too), so no surviving CPT references a removed variable.
    """
    targets = set(targets)
    keep = set(diagram.ids)
    evidence = set(diagram.evidence)

    def barren_pass():
        removed = True
        while removed:
            removed = False
            children = {v: set() for v in keep}
            for p, c in diagram.arcs:
                if p in keep and c in keep:
                    children[p].add(c)
            for var in sorted(keep):
                if var in targets or var in evidence:
                    continue
                if diagram.variable(var).kind == VALUE:
                    continue
                if not children[var]:
                    keep.discard(var)
                    removed = True

    barren_pass()

    graph = diagram.digraph().subgraph(keep).copy()
    candidates = {
        var
        for var in keep
        if diagram.variable(var).kind == CHANCE
        and var not in targets
        and var not in evidence
        and _d_separated_sets(graph, {var}, targets & keep, evidence & keep)
    }
    # Close downward: a removed variable may not remain a CPT parent.
    changed = True
    while changed:
        changed = False
        for var in sorted(candidates):
            for child in diagram.children(var):
                if child not in keep:
                    continue
                if diagram.variable(child).kind == CHANCE and child not in candidates:
                    candidates.discard(var)
                    changed = True
                    break
    keep -= candidates
    barren_pass()

    variables = tuple(v for v in diagram.variables if v.id in keep)
    arcs = tuple((p, c) for p, c in diagram.arcs if p in keep and c in keep)
    cpts = {v: f for v, f in diagram.cpts.items() if v in keep}
    value_tables = {v: f for v, f in diagram.value_tables.items() if v in keep}
    return InfluenceDiagram(
        variables=variables,
        arcs=arcs,
        cpts=cpts,
        value_tables=value_tables,
        combination=diagram.combination,
        decision_order=tuple(d for d in diagram.decision_order if d in keep),
        evidence={v: i for v, i in diagram.evidence.items() if v in keep},
    )
