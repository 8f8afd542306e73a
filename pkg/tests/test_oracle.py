import numpy as np
import pytest

from idsolve import oracle
from idsolve.errors import PolicySpaceTooLarge, ZeroEvidenceProbability
from idsolve.factors import Factor
from idsolve.model import CHANCE, DECISION, VALUE, InfluenceDiagram, Variable
from idsolve.policy_queries import DecisionRule

from conftest import UMBRELLA_MEV, make_mdp_chain, make_umbrella


def constant_rule(diagram, decision, choice=0):
    return DecisionRule(
        decision=decision,
        scope=(),
        cards=(),
        alternatives=diagram.variable(decision).outcomes,
        choices=np.asarray(choice),
        undetermined=np.asarray(False),
    )


class TestExpectedValue:
    def test_umbrella_always_leave(self, umbrella):
        ev, p_e = oracle.expected_value(
            umbrella, [constant_rule(umbrella, "bring_umbrella", 0)]
        )
        assert ev == pytest.approx(70.0, abs=1e-12)  # 0.7*100 + 0.3*0
        assert p_e == pytest.approx(1.0, abs=1e-12)

    def test_umbrella_always_take(self, umbrella):
        ev, _ = oracle.expected_value(
            umbrella, [constant_rule(umbrella, "bring_umbrella", 1)]
        )
        assert ev == pytest.approx(0.7 * 80 + 0.3 * 70, abs=1e-12)

    def test_constant_value(self, umbrella):
        flat = InfluenceDiagram(
            variables=umbrella.variables,
            arcs=umbrella.arcs,
            cpts=umbrella.cpts,
            value_tables={
                "satisfaction": Factor(
                    ("weather", "bring_umbrella"), np.full((2, 2), 3.5)
                )
            },
            decision_order=umbrella.decision_order,
        )
        for choice in (0, 1):
            ev, _ = oracle.expected_value(
                flat, [constant_rule(flat, "bring_umbrella", choice)]
            )
            assert ev == pytest.approx(3.5, abs=1e-12)

    def test_impossible_evidence(self):
        diagram = InfluenceDiagram(
            variables=(
                Variable("a", CHANCE, ("0", "1")),
                Variable("d", DECISION, ("x", "y")),
                Variable("v", VALUE),
            ),
            arcs=(("a", "v"), ("d", "v")),
            cpts={"a": Factor(("a",), [1.0, 0.0])},
            value_tables={"v": Factor(("a", "d"), [[1.0, 2.0], [3.0, 4.0]])},
            decision_order=("d",),
            evidence={"a": 1},
        )
        with pytest.raises(ZeroEvidenceProbability):
            oracle.expected_value(diagram, [constant_rule(diagram, "d", 0)])

    def test_missing_policy_rejected(self, umbrella):
        with pytest.raises(ValueError):
            oracle.expected_value(umbrella, [])


class TestBruteSolve:
    def test_umbrella_unique_optimum(self, umbrella):
        result = oracle.brute_solve(umbrella)
        assert result.mev == pytest.approx(UMBRELLA_MEV, abs=1e-12)
        assert len(result.optimal) == 1
        assert result.optimal[0][0].choices.tolist() == [0, 1]

    def test_total_tie(self):
        diagram = InfluenceDiagram(
            variables=(
                Variable("a", CHANCE, ("0", "1")),
                Variable("d", DECISION, ("x", "y")),
                Variable("v", VALUE),
            ),
            arcs=(("a", "v"),),
            cpts={"a": Factor(("a",), [0.4, 0.6])},
            value_tables={"v": Factor(("a",), [1.0, 2.0])},
            decision_order=("d",),
        )
        result = oracle.brute_solve(diagram)
        assert len(result.optimal) == 2

    def test_policy_space_guard(self):
        diagram = make_mdp_chain(periods=3, seed=11)
        with pytest.raises(PolicySpaceTooLarge):
            oracle.brute_solve(diagram, "full-information")

    def test_relevant_equals_full_information(self, umbrella, umbrella_tv, mdp2):
        for diagram in (umbrella, umbrella_tv, mdp2):
            relevant = oracle.brute_solve(diagram, "relevant")
            full = oracle.brute_solve(diagram, "full-information")
            assert relevant.mev == pytest.approx(full.mev, abs=1e-9)

    def test_as_result(self, umbrella):
        result = oracle.brute_solve(umbrella).as_result(umbrella)
        assert result.mev == pytest.approx(UMBRELLA_MEV, abs=1e-12)
        assert result.evidence_probability == pytest.approx(1.0, abs=1e-12)
        assert result.diagnostics["backend"] == "oracle"
