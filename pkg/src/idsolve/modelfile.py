"""JSON model and policy files.

A model document lists variables, arcs, CPTs, value tables, the decision
order, and evidence.  Parent order in a CPT entry fixes the table's axis
order (parents first, the variable itself last, row-major), so there is
no ambiguity about how flat probability lists map onto table cells.
Serialization sorts keys and uses fixed list orders, making output
byte-deterministic.
"""

from __future__ import annotations

import json
from typing import Mapping, Sequence

import numpy as np

from .errors import SolverError
from .factors import Factor
from .model import CHANCE, DECISION, VALUE, InfluenceDiagram, Variable
from .policy_queries import DecisionRule, EvaluationResult

KINDS = (CHANCE, DECISION, VALUE)


class ModelFileError(SolverError):
    code = "MODEL_FILE"


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ModelFileError(message)


def load_model(text: str) -> InfluenceDiagram:
    """Parse a JSON model document into an influence diagram."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"not valid JSON: {exc}") from exc
    _require(isinstance(doc, dict), "top level must be an object")

    variables = []
    for entry in doc.get("variables", []):
        _require(isinstance(entry, dict), "variable entries must be objects")
        _require("id" in entry and "kind" in entry, "variable needs id and kind")
        kind = entry["kind"]
        _require(kind in KINDS, f"unknown kind {kind!r}")
        outcomes = entry.get("outcomes")
        if kind == VALUE:
            _require(outcomes in (None, []), "value variables have no outcomes")
            variables.append(Variable(entry["id"], VALUE))
        else:
            _require(
                isinstance(outcomes, list) and len(outcomes) >= 2,
                f"{entry['id']} needs at least two outcomes",
            )
            variables.append(Variable(entry["id"], kind, tuple(outcomes)))
    by_id = {v.id: v for v in variables}
    _require(len(by_id) == len(variables), "duplicate variable ids")

    arcs = []
    for arc in doc.get("arcs", []):
        _require(
            isinstance(arc, (list, tuple)) and len(arc) == 2,
            "arcs must be [parent, child] pairs",
        )
        arcs.append((arc[0], arc[1]))

    def table(scope, flat, what):
        cards = []
        for var in scope:
            _require(var in by_id, f"{what} references unknown variable {var}")
            _require(by_id[var].kind != VALUE, f"{what} uses value node {var} as an axis")
            cards.append(by_id[var].cardinality)
        flat = np.asarray(flat, dtype=float)
        _require(
            flat.size == int(np.prod(cards, dtype=int)),
            f"{what} has {flat.size} numbers, expected {int(np.prod(cards, dtype=int))}",
        )
        return flat.reshape(tuple(cards))

    cpts = {}
    for entry in doc.get("cpts", []):
        var = entry.get("variable")
        parents = tuple(entry.get("parents", []))
        scope = parents + (var,)
        cpts[var] = Factor(
            scope, table(scope, entry.get("probabilities", []), f"cpt for {var}")
        )

    value_tables = {}
    for entry in doc.get("values", []):
        vid = entry.get("id")
        attributes = tuple(entry.get("attributes", []))
        value_tables[vid] = Factor(
            attributes, table(attributes, entry.get("table", []), f"value table {vid}")
        )

    evidence = {}
    for var, outcome in doc.get("evidence", {}).items():
        _require(var in by_id, f"evidence on unknown variable {var}")
        outcomes = by_id[var].outcomes or ()
        if isinstance(outcome, str) and outcome in outcomes:
            evidence[var] = outcomes.index(outcome)
        elif isinstance(outcome, str) and not outcome.lstrip("-").isdigit():
            raise ModelFileError(
                f"evidence outcome {outcome!r} not among {list(outcomes)}"
            )
        else:
            evidence[var] = int(outcome)

    return InfluenceDiagram(
        variables=tuple(variables),
        arcs=tuple(arcs),
        cpts=cpts,
        value_tables=value_tables,
        combination=doc.get("combination", "sum" if len(value_tables) > 1 else "none"),
        decision_order=tuple(doc.get("decision_order", [])),
        evidence=evidence,
    )


def dump_model(diagram: InfluenceDiagram) -> str:
    """Serialize a diagram back to canonical JSON text."""
    doc = {
        "variables": [
            {
                "id": v.id,
                "kind": v.kind,
                "outcomes": list(v.outcomes) if v.outcomes else None,
            }
            for v in diagram.variables
        ],
        "arcs": [list(arc) for arc in diagram.arcs],
        "cpts": [
            {
                "variable": var,
                "parents": list(cpt.scope[:-1]),
                "probabilities": cpt.values.reshape(-1).tolist(),
            }
            for var, cpt in sorted(diagram.cpts.items())
        ],
        "values": [
            {
                "id": vid,
                "attributes": list(tab.scope),
                "table": tab.values.reshape(-1).tolist(),
            }
            for vid, tab in sorted(diagram.value_tables.items())
        ],
        "combination": diagram.combination,
        "decision_order": list(diagram.decision_order),
        "evidence": {
            var: diagram.variable(var).outcomes[idx]
            for var, idx in sorted(diagram.evidence.items())
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def dump_policy(result: EvaluationResult) -> str:
    """Policy document: per decision, the scope and the chosen alternative
    for each scope configuration in row-major order."""
    doc = {
        "mev": result.mev,
        "meu": result.meu,
        "evidence_probability": result.evidence_probability,
        "policies": [
            {
                "decision": rule.decision,
                "scope": list(rule.scope),
                "choices": [
                    rule.alternatives[i] for i in rule.choices.reshape(-1).tolist()
                ],
            }
            for rule in result.policies
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_policy(text: str, diagram: InfluenceDiagram) -> tuple[DecisionRule, ...]:
    """Parse a policy document against a diagram's variables."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"not valid JSON: {exc}") from exc
    rules = []
    for entry in doc.get("policies", []):
        decision = entry.get("decision")
        _require(decision in diagram.ids, f"unknown decision {decision}")
        alternatives = diagram.variable(decision).outcomes
        scope = tuple(entry.get("scope", []))
        cards = tuple(diagram.cardinality(v) for v in scope)
        raw = entry.get("choices", [])
        choices = []
        for c in raw:
            if isinstance(c, str):
                _require(
                    c in alternatives,
                    f"choice {c!r} not an alternative of {decision}",
                )
                choices.append(alternatives.index(c))
            else:
                choices.append(int(c))
        _require(
            len(choices) == int(np.prod(cards, dtype=int)),
            f"policy for {decision} has {len(choices)} choices, "
            f"expected {int(np.prod(cards, dtype=int))}",
        )
        rules.append(
            DecisionRule(
                decision=decision,
                scope=scope,
                cards=cards,
                alternatives=alternatives,
                choices=np.asarray(choices).reshape(cards),
                undetermined=np.zeros(cards, dtype=bool),
            )
        )
    return tuple(rules)
