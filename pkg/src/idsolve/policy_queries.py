"""Decision evaluation by posterior queries on the converted belief network.

The optimal alternative for each information state is the argmax of the
joint posterior of the decision and its relevant information given that
the synthetic Utility node is observed at 1.  Decisions are processed in
reverse order; each extracted policy is installed as a deterministic CPT
before the next query.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import inference, transform
from .errors import DegenerateValue, NegativeEntry
from .factors import Factor, PROBABILITY, indicator
from .model import InfluenceDiagram
from .transform import DecisionNetwork, DecisionSpec


@dataclass(frozen=True)
class DecisionRule:
    """Deterministic policy for one decision over its information scope.

    ``choices`` maps each scope configuration (row-major array) to the
    chosen alternative index.  ``undetermined`` flags configurations with
    zero posterior mass, where any alternative is vacuously optimal and
    index 0 is emitted.
    """

    decision: str
    scope: tuple[str, ...]
    cards: tuple[int, ...]
    alternatives: tuple[str, ...]
    choices: np.ndarray
    undetermined: np.ndarray

    def __post_init__(self):
        choices = np.asarray(self.choices, dtype=int).reshape(self.cards)
        undetermined = np.asarray(self.undetermined, dtype=bool).reshape(self.cards)
        choices.setflags(write=False)
        undetermined.setflags(write=False)
        object.__setattr__(self, "choices", choices)
        object.__setattr__(self, "undetermined", undetermined)

    def to_cpt(self) -> Factor:
        """Deterministic CPT over scope + (decision,)."""
        n = len(self.alternatives)
        values = np.zeros(self.cards + (n,))
        flat_choices = self.choices.reshape(-1)
        values.reshape(-1, n)[np.arange(flat_choices.size), flat_choices] = 1.0
        return Factor(self.scope + (self.decision,), values, PROBABILITY)


@dataclass(frozen=True)
class EvaluationResult:
    policies: tuple[DecisionRule, ...]
    mev: float
    meu: float | None
    evidence_probability: float
    diagnostics: dict = field(default_factory=dict)


def extract_policy(
    joint: Factor, decision: str, alternatives: Sequence[str]
) -> DecisionRule:
    """Per-configuration argmax of a nonnegative joint over {decision} ∪ scope.

    Ties break to the lowest alternative index.  Configurations whose
    whole column is zero are flagged and mapped to alternative 0.
    """
    if np.any(joint.values < -1e-12):
        raise NegativeEntry("joint used for policy extraction has negative entries")
    scope = tuple(v for v in joint.scope if v != decision)
    values = joint.aligned_values(scope + (decision,))
    values = np.clip(values, 0.0, None)
    choices = np.argmax(values, axis=-1)
    undetermined = values.sum(axis=-1) == 0.0
    choices = np.where(undetermined, 0, choices)
    cards = values.shape[:-1]
    return DecisionRule(
        decision=decision,
        scope=scope,
        cards=cards,
        alternatives=tuple(alternatives),
        choices=choices,
        undetermined=undetermined,
    )


# -- shared backend plumbing ------------------------------------------


def network_tree(net: DecisionNetwork) -> inference.ClusterTree:
    """Join tree for a converted network with each decision kept next to
    its policy scope."""
    families = [cpt.scope for cpt in net.cpts.values()]
    constraints = [(spec.id,) + spec.scope for spec in net.decisions]
    return inference.build_cluster_tree(net.cards, families, constraints)


def network_factors(
    net: DecisionNetwork,
    policy_cpts: Mapping[str, Factor],
    extra: Sequence[Factor] = (),
    skip: Sequence[str] = (),
) -> list[Factor]:
    factors = []
    for variable in net.variables:
        if variable.id in skip:
            continue
        factors.append(policy_cpts.get(variable.id, net.cpts[variable.id]))
    factors.extend(inference.evidence_factors(net.evidence, net.cards))
    factors.extend(extra)
    return factors


def complete_policies(
    diagram: InfluenceDiagram, rules: Mapping[str, DecisionRule]
) -> tuple[DecisionRule, ...]:
    """Policies in decision order; decisions dropped by pruning become
    unconditional alternative-0 rules (they cannot affect the value)."""
    out = []
    for decision in diagram.decision_order:
        if decision in rules:
            out.append(rules[decision])
        else:
            out.append(
                DecisionRule(
                    decision=decision,
                    scope=(),
                    cards=(),
                    alternatives=diagram.variable(decision).outcomes,
                    choices=np.asarray(0),
                    undetermined=np.asarray(False),
                )
            )
    return tuple(out)


def degenerate_result(
    diagram: InfluenceDiagram, value: float, backend: str
) -> EvaluationResult:
    """Constant value function: every policy is optimal, MEV is the constant."""
    from . import oracle

    policies = complete_policies(diagram, {})
    _, p_evidence = oracle.expected_value(diagram, policies)
    return EvaluationResult(
        policies=policies,
        mev=value,
        meu=None,
        evidence_probability=p_evidence,
        diagnostics={"backend": backend, "degenerate_value": True},
    )


def finish_result(
    diagram: InfluenceDiagram,
    rules: Mapping[str, DecisionRule],
    mev: float,
    scale: tuple[float, float],
    p_evidence: float,
    diagnostics: dict,
) -> EvaluationResult:
    v_min, v_max = scale
    meu = (mev - v_min) / (v_max - v_min) if v_max > v_min else None
    return EvaluationResult(
        policies=complete_policies(diagram, rules),
        mev=mev,
        meu=meu,
        evidence_probability=p_evidence,
        diagnostics=diagnostics,
    )


# -- the query backend ------------------------------------------------


def solve_by_queries(
    diagram: InfluenceDiagram,
    use_full_information: bool = False,
    prune_barren: bool = True,
) -> EvaluationResult:
    """Backward iteration of posterior queries P{D, R | U=1, evidence, later
    policies} with deterministic policy installation after each step."""
    try:
        net = transform.to_belief_network(
            diagram, use_full_information=use_full_information, prune_barren=prune_barren
        )
    except DegenerateValue as exc:
        return degenerate_result(diagram, exc.value, "queries")

    tree = network_tree(net)
    stats = inference.CollectStats()
    utility = net.synthetic_variable
    observed_utility = indicator(utility, 2, 1)

    rules: dict[str, DecisionRule] = {}
    policy_cpts: dict[str, Factor] = {}
    for spec in reversed(net.decisions):
        factors = network_factors(net, policy_cpts, extra=[observed_utility])
        potentials = inference.initialize_potentials(tree, factors)
        joint, _ = inference.marginal(
            tree, potentials, (spec.id,) + spec.scope, stats
        )
        rule = extract_policy(joint, spec.id, spec.alternatives)
        rules[spec.id] = rule
        policy_cpts[spec.id] = rule.to_cpt()

    factors = network_factors(net, policy_cpts)
    potentials = inference.initialize_potentials(tree, factors)
    posterior, p_evidence = inference.marginal(tree, potentials, (utility,), stats)
    meu = float(posterior.values[1])
    v_min, v_max = net.scale
    mev = v_min + (v_max - v_min) * meu
    return finish_result(
        diagram,
        rules,
        mev,
        net.scale,
        p_evidence,
        {
            "backend": "queries",
            "messages": stats.messages,
            "max_cluster_size": stats.max_cluster_size,
            "clusters": [list(c) for c in tree.clusters],
        },
    )
