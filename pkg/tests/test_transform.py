import numpy as np
import pytest

from idsolve import transform
from idsolve.errors import DegenerateValue, NegativeFactor
from idsolve.factors import Factor, VALUATION
from idsolve.model import CHANCE, DECISION, VALUE, InfluenceDiagram, Variable
from idsolve.transform import (
    MERGED_VALUE_ID,
    merge_values,
    to_belief_network,
    to_valuation_network,
    value_scale,
)

from conftest import make_mdp_chain, make_umbrella


class TestMergeValues:
    def test_single_value_untouched(self, umbrella):
        assert merge_values(umbrella) is umbrella

    def test_sum_merge(self):
        diagram = make_mdp_chain(periods=2, seed=3, combination="sum")
        merged = merge_values(diagram)
        assert merged.value_ids == (MERGED_VALUE_ID,)
        table = merged.value_tables[MERGED_VALUE_ID]
        r1 = diagram.value_tables["reward1"]
        r2 = diagram.value_tables["reward2"]
        # merged table at each configuration equals the sum of the locals
        for idx in np.ndindex(*table.values.shape):
            assignment = dict(zip(table.scope, idx))
            a = r1.values[tuple(assignment[v] for v in r1.scope)]
            b = r2.values[tuple(assignment[v] for v in r2.scope)]
            assert table.values[idx] == pytest.approx(a + b, abs=1e-12)

    def test_product_merge(self):
        diagram = make_mdp_chain(periods=2, seed=3, combination="product")
        merged = merge_values(diagram)
        table = merged.value_tables[MERGED_VALUE_ID]
        r1 = diagram.value_tables["reward1"]
        r2 = diagram.value_tables["reward2"]
        for idx in np.ndindex(*table.values.shape):
            assignment = dict(zip(table.scope, idx))
            a = r1.values[tuple(assignment[v] for v in r1.scope)]
            b = r2.values[tuple(assignment[v] for v in r2.scope)]
            assert table.values[idx] == pytest.approx(a * b, rel=1e-12)

    def test_product_with_negative_rejected(self):
        diagram = make_mdp_chain(periods=2, seed=3, combination="sum")
        bad = InfluenceDiagram(
            variables=diagram.variables,
            arcs=diagram.arcs,
            cpts=diagram.cpts,
            value_tables=diagram.value_tables,  # has negative entries
            combination="product",
            decision_order=diagram.decision_order,
        )
        with pytest.raises(NegativeFactor):
            merge_values(bad)

    def test_value_scale(self, umbrella):
        assert value_scale(umbrella) == (0.0, 100.0)


class TestBeliefNetwork:
    def test_umbrella_utility_rows(self, umbrella):
        net = to_belief_network(umbrella)
        cpt = net.cpts[net.synthetic_variable]
        u = cpt.aligned_values(("weather", "bring_umbrella", net.synthetic_variable))
        # u(w, b) = v(w, b) / 100
        assert np.allclose(u[..., 1], [[1.0, 0.8], [0.0, 0.7]], atol=1e-12)
        assert np.allclose(u[..., 0] + u[..., 1], 1.0, atol=1e-12)
        assert net.scale == (0.0, 100.0)

    def test_decision_becomes_uniform_chance(self, umbrella):
        net = to_belief_network(umbrella)
        spec = net.decisions[0]
        assert spec.id == "bring_umbrella"
        assert spec.scope == ("forecast",)
        cpt = net.cpts["bring_umbrella"]
        assert set(cpt.scope) == {"forecast", "bring_umbrella"}
        assert np.allclose(cpt.values, 0.5, atol=1e-12)

    def test_degenerate_value(self):
        diagram = make_umbrella()
        flat = InfluenceDiagram(
            variables=diagram.variables,
            arcs=diagram.arcs,
            cpts=diagram.cpts,
            value_tables={
                "satisfaction": Factor(
                    ("weather", "bring_umbrella"), np.full((2, 2), 5.0)
                )
            },
            decision_order=diagram.decision_order,
        )
        with pytest.raises(DegenerateValue) as exc:
            to_belief_network(flat)
        assert exc.value.value == 5.0

    def test_full_information_scope(self, umbrella_tv):
        net = to_belief_network(umbrella_tv, use_full_information=True)
        spec = {s.id: s for s in net.decisions}["bring_umbrella"]
        assert set(spec.scope) == {"tv_station", "forecast"}
        assert set(spec.scope) == set(spec.information)


class TestValuationNetwork:
    def test_rows_keep_original_units(self, umbrella):
        net = to_valuation_network(umbrella)
        cpt = net.cpts[net.synthetic_variable]
        assert cpt.semantics == VALUATION
        rows = cpt.aligned_values(("weather", "bring_umbrella", net.synthetic_variable))
        assert np.allclose(rows[..., 0], 1.0, atol=1e-12)
        assert np.allclose(rows[..., 1], [[100.0, 80.0], [0.0, 70.0]], atol=1e-12)

    def test_negative_values_allowed(self):
        diagram = make_mdp_chain(periods=2, seed=7, combination="sum")
        net = to_valuation_network(diagram)
        assert net.cpts[net.synthetic_variable].values.min() < 0

    def test_constant_value_allowed(self):
        diagram = make_umbrella()
        flat = InfluenceDiagram(
            variables=diagram.variables,
            arcs=diagram.arcs,
            cpts=diagram.cpts,
            value_tables={
                "satisfaction": Factor(
                    ("weather", "bring_umbrella"), np.full((2, 2), 5.0)
                )
            },
            decision_order=diagram.decision_order,
        )
        net = to_valuation_network(flat)
        assert net.scale == (5.0, 5.0)
