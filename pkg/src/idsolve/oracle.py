"""Brute-force ground truth by exhaustive policy enumeration.

Exists only to certify the real backends at desk scale: every expected
value is computed from the full joint distribution by definition, and
optimal policies are found by trying every deterministic policy vector.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import model
from .errors import PolicySpaceTooLarge, ZeroEvidenceProbability
from .factors import Factor, product
from .model import InfluenceDiagram
from .policy_queries import DecisionRule, EvaluationResult

MAX_POLICY_SPACE = 10**6


def _combined_value(diagram: InfluenceDiagram) -> Factor:
    tables = [diagram.value_tables[v] for v in sorted(diagram.value_ids)]
    if not tables:
        raise ValueError("diagram has no value node")
    combined = tables[0]
    for table in tables[1:]:
        if diagram.combination == "product":
            combined = combined.multiply(table)
        else:
            combined = combined.add(table)
    return combined


def expected_value(
    diagram: InfluenceDiagram, policies: Sequence[DecisionRule]
) -> tuple[float, float]:
    """E{value | policies, evidence} and P{evidence}, by full enumeration."""
    rules = {rule.decision: rule for rule in policies}
    missing = [d for d in diagram.decision_ids if d not in rules]
    if missing:
        raise ValueError(f"policy does not cover decisions {missing}")
    factors = [diagram.cpts[v] for v in sorted(diagram.cpts)]
    factors += [rules[d].to_cpt() for d in diagram.decision_order]
    factors += [
        Factor((v,), np.eye(diagram.cardinality(v))[i])
        for v, i in sorted(diagram.evidence.items())
    ]
    joint = product(factors)
    p_evidence = joint.total()
    if p_evidence == 0.0:
        raise ZeroEvidenceProbability("evidence has probability zero under this policy")
    mass = joint.multiply(_combined_value(diagram)).total()
    return mass / p_evidence, p_evidence


@dataclass(frozen=True)
class BruteResult:
    """All maximizing policy vectors plus the maximal expected value."""

    optimal: tuple[tuple[DecisionRule, ...], ...]
    mev: float

    def as_result(self, diagram: InfluenceDiagram | None = None) -> EvaluationResult:
        """First (lowest-index) maximizer packaged like a backend result."""
        p_evidence = float("nan")
        if diagram is not None:
            _, p_evidence = expected_value(diagram, self.optimal[0])
        return EvaluationResult(
            policies=self.optimal[0],
            mev=self.mev,
            meu=None,
            evidence_probability=p_evidence,
            diagnostics={"backend": "oracle", "n_optimal": len(self.optimal)},
        )


def _policy_scopes(diagram: InfluenceDiagram, scope_mode: str):
    scopes = []
    for decision in diagram.decision_order:
        if scope_mode == "full-information":
            scope = diagram.information_set(decision)
        elif scope_mode == "relevant":
            scope = model.relevant_information(diagram, decision)
        else:
            raise ValueError(f"unknown scope_mode {scope_mode!r}")
        scopes.append(tuple(scope))
    return scopes


def brute_solve(
    diagram: InfluenceDiagram, scope_mode: str = "relevant"
) -> BruteResult:
    """Enumerate every deterministic policy vector and keep the maximizers.

    The policy space (product over decisions of alternatives to the power
    of scope configurations) is capped at 10^6.
    """
    scopes = _policy_scopes(diagram, scope_mode)
    decisions = diagram.decision_order
    alternative_lists = [diagram.variable(d).outcomes for d in decisions]
    config_counts = [
        int(np.prod([diagram.cardinality(v) for v in scope], dtype=int))
        for scope in scopes
    ]
    space = 1
    for n_alt, n_cfg in zip(map(len, alternative_lists), config_counts):
        space *= n_alt**n_cfg
        if space > MAX_POLICY_SPACE:
            raise PolicySpaceTooLarge(f"more than {MAX_POLICY_SPACE} policies")

    # Sum out everything the policies never touch once, up front.
    kept = set(decisions)
    for scope in scopes:
        kept.update(scope)
    cpt_factors = [diagram.cpts[v] for v in sorted(diagram.cpts)]
    cpt_factors += [
        Factor((v,), np.eye(diagram.cardinality(v))[i])
        for v, i in sorted(diagram.evidence.items())
    ]
    base = product(cpt_factors)
    weight_prob = base.sum_out([v for v in base.scope if v not in kept])
    weight_value = base.multiply(_combined_value(diagram))
    weight_value = weight_value.sum_out(
        [v for v in weight_value.scope if v not in kept]
    )

    def rule_for(index: int, choices: tuple[int, ...]) -> DecisionRule:
        scope = scopes[index]
        cards = tuple(diagram.cardinality(v) for v in scope)
        return DecisionRule(
            decision=decisions[index],
            scope=scope,
            cards=cards,
            alternatives=alternative_lists[index],
            choices=np.asarray(choices).reshape(cards),
            undetermined=np.zeros(cards, dtype=bool),
        )

    per_decision = [
        itertools.product(range(len(alts)), repeat=n_cfg)
        for alts, n_cfg in zip(alternative_lists, config_counts)
    ]
    best_ev = None
    best: list[tuple[tuple[DecisionRule, ...], float]] = []
    for combo in itertools.product(*per_decision):
        policy = tuple(rule_for(i, choices) for i, choices in enumerate(combo))
        selected_p = weight_prob
        selected_v = weight_value
        for rule in policy:
            cpt = rule.to_cpt()
            selected_p = selected_p.multiply(cpt)
            selected_v = selected_v.multiply(cpt)
        p_evidence = selected_p.total()
        if p_evidence == 0.0:
            continue
        ev = selected_v.total() / p_evidence
        if best_ev is None or ev > best_ev + 1e-12 * max(1.0, abs(ev)):
            best_ev = ev
            best = [(policy, ev)]
        elif ev >= best_ev - 1e-12 * max(1.0, abs(best_ev)):
            best.append((policy, ev))
    if best_ev is None:
        raise ZeroEvidenceProbability("evidence impossible under every policy")
    return BruteResult(tuple(policy for policy, _ in best), best_ev)
