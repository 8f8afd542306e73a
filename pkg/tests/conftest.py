"""Shared fixtures: worked example diagrams and random diagram generators."""

import numpy as np
import pytest

from idsolve.factors import Factor
from idsolve.model import (
    CHANCE,
    DECISION,
    VALUE,
    InfluenceDiagram,
    Variable,
    complete_memory_arcs,
)


def make_umbrella():
    """Single-decision umbrella problem: take iff the forecast says rain."""
    variables = (
        Variable("weather", CHANCE, ("sun", "rain")),
        Variable("forecast", CHANCE, ("sunny", "rainy")),
        Variable("bring_umbrella", DECISION, ("leave", "take")),
        Variable("satisfaction", VALUE),
    )
    arcs = (
        ("weather", "forecast"),
        ("forecast", "bring_umbrella"),
        ("weather", "satisfaction"),
        ("bring_umbrella", "satisfaction"),
    )
    cpts = {
        "weather": Factor(("weather",), [0.7, 0.3]),
        "forecast": Factor(("weather", "forecast"), [[0.8, 0.2], [0.2, 0.8]]),
    }
    values = {
        "satisfaction": Factor(
            ("weather", "bring_umbrella"), [[100.0, 80.0], [0.0, 70.0]]
        )
    }
    return InfluenceDiagram(
        variables=variables,
        arcs=arcs,
        cpts=cpts,
        value_tables=values,
        decision_order=("bring_umbrella",),
    )


UMBRELLA_MEV = 84.0  # 0.7*(0.8*100 + 0.2*80) + 0.3*(0.8*70 + 0.2*0)


def make_umbrella_tv(newspaper_observed=True, newspaper_read=True):
    """Two-decision variant: pick a TV station, then decide on the umbrella.

    ``newspaper_read`` controls whether the newspaper is an informational
    parent of the station choice; without it (and unobserved) the
    newspaper is barren.
    """
    variables = (
        Variable("weather", CHANCE, ("sun", "rain")),
        Variable("newspaper", CHANCE, ("says_sun", "says_rain")),
        Variable("tv_station", DECISION, ("channel4", "channel7")),
        Variable("forecast", CHANCE, ("sunny", "rainy")),
        Variable("bring_umbrella", DECISION, ("leave", "take")),
        Variable("satisfaction", VALUE),
    )
    arcs = [
        ("weather", "newspaper"),
        ("weather", "forecast"),
        ("tv_station", "forecast"),
        ("tv_station", "bring_umbrella"),
        ("forecast", "bring_umbrella"),
        ("weather", "satisfaction"),
        ("bring_umbrella", "satisfaction"),
    ]
    if newspaper_read:
        arcs.insert(2, ("newspaper", "tv_station"))
        arcs.append(("newspaper", "bring_umbrella"))
    cpts = {
        "weather": Factor(("weather",), [0.7, 0.3]),
        "newspaper": Factor(("weather", "newspaper"), [[0.85, 0.15], [0.25, 0.75]]),
        # channel4 is accurate (0.9), channel7 is not (0.6)
        "forecast": Factor(
            ("weather", "tv_station", "forecast"),
            [[[0.9, 0.1], [0.6, 0.4]], [[0.1, 0.9], [0.4, 0.6]]],
        ),
    }
    values = {
        "satisfaction": Factor(
            ("weather", "bring_umbrella"), [[100.0, 80.0], [0.0, 70.0]]
        )
    }
    evidence = {"newspaper": 1} if newspaper_observed else {}
    return InfluenceDiagram(
        variables=variables,
        arcs=tuple(arcs),
        cpts=cpts,
        value_tables=values,
        decision_order=("tv_station", "bring_umbrella"),
        evidence=evidence,
    )


def make_mdp_chain(periods=2, seed=7, combination="sum"):
    """Finite-horizon chain: state -> decision -> next state, local reward
    on (next state, decision).  Memory arcs are completed explicitly."""
    rng = np.random.default_rng(seed)
    variables = []
    arcs = []
    cpts = {}
    values = {}

    def random_rows(shape):
        raw = 0.05 + rng.uniform(size=shape)
        return raw / raw.sum(axis=-1, keepdims=True)

    variables.append(Variable("state1", CHANCE, ("lo", "hi")))
    cpts["state1"] = Factor(("state1",), random_rows((2,)))
    for i in range(1, periods + 1):
        state, nxt, dec, val = f"state{i}", f"state{i+1}", f"decision{i}", f"reward{i}"
        variables.append(Variable(dec, DECISION, ("stay", "move")))
        variables.append(Variable(nxt, CHANCE, ("lo", "hi")))
        variables.append(Variable(val, VALUE))
        arcs += [(state, dec), (state, nxt), (dec, nxt), (nxt, val), (dec, val)]
        cpts[nxt] = Factor((state, dec, nxt), random_rows((2, 2, 2)))
        if combination == "product":
            table = rng.uniform(0.5, 10.0, size=(2, 2))
        else:
            table = rng.uniform(-10.0, 10.0, size=(2, 2))
        values[val] = Factor((nxt, dec), table)
    diagram = InfluenceDiagram(
        variables=tuple(variables),
        arcs=tuple(arcs),
        cpts=cpts,
        value_tables=values,
        combination=combination,
        decision_order=tuple(f"decision{i}" for i in range(1, periods + 1)),
    )
    return complete_memory_arcs(diagram)


def random_diagram(rng, max_chance=5, max_decisions=2, max_alternatives=3,
                   evidence_probability=0.5, max_policy_space=3000):
    """Random valid influence diagram with a tractable policy space.

    Chance variables are binary with CPT entries bounded away from zero;
    decisions have 2-3 alternatives; values are uniform in [-10, 10].
    Resamples until the relevant-scope policy space stays enumerable.
    """
    for _ in range(200):
        diagram = _random_diagram_once(
            rng, max_chance, max_decisions, max_alternatives, evidence_probability
        )
        if diagram is None:
            continue
        from idsolve import model as m

        space = 1
        for decision in diagram.decision_order:
            scope = m.relevant_information(diagram, decision)
            n_cfg = int(np.prod([diagram.cardinality(v) for v in scope], dtype=int))
            space *= diagram.cardinality(decision) ** n_cfg
        if space <= max_policy_space:
            return diagram
    raise RuntimeError("could not generate a tractable random diagram")


def _random_diagram_once(rng, max_chance, max_decisions, max_alternatives,
                         evidence_probability):
    n_chance = int(rng.integers(2, max_chance + 1))
    n_decisions = int(rng.integers(1, max_decisions + 1))
    chance_ids = [f"c{i}" for i in range(n_chance)]
    decision_ids = [f"d{i}" for i in range(n_decisions)]

    # One global temporal order; decisions at random slots.
    sequence = list(chance_ids)
    for d in decision_ids:
        sequence.insert(int(rng.integers(0, len(sequence) + 1)), d)
    # keep declared decision order consistent with the sequence
    decision_order = [v for v in sequence if v in decision_ids]

    variables = []
    arcs = []
    cpts = {}
    for var in sequence:
        position = sequence.index(var)
        predecessors = sequence[:position]
        if var in decision_ids:
            n_alt = int(rng.integers(2, max_alternatives + 1))
            variables.append(
                Variable(var, DECISION, tuple(f"a{k}" for k in range(n_alt)))
            )
            observable = [p for p in predecessors if p in chance_ids]
            rng.shuffle(observable)
            n_par = int(rng.integers(0, min(2, len(observable)) + 1))
            arcs += [(p, var) for p in sorted(observable[:n_par])]
        else:
            variables.append(Variable(var, CHANCE, ("f", "t")))
            pool = list(predecessors)
            rng.shuffle(pool)
            n_par = int(rng.integers(0, min(2, len(pool)) + 1))
            parents = sorted(pool[:n_par])
            arcs += [(p, var) for p in parents]
            shape = tuple(
                (max_alternatives if p in decision_ids else 2) for p in parents
            )
            # cardinalities of decision parents fixed below, rebuild after
            cpts[var] = (parents, shape)

    id_card = {v.id: (v.cardinality or 2) for v in variables}
    real_cpts = {}
    for var, (parents, _) in cpts.items():
        shape = tuple(id_card[p] for p in parents) + (2,)
        raw = 0.05 + rng.uniform(size=shape)
        real_cpts[var] = Factor(
            tuple(parents) + (var,), raw / raw.sum(axis=-1, keepdims=True)
        )

    # Value node over a small attribute set that includes the last decision.
    pool = [v for v in sequence if v != decision_order[-1]]
    rng.shuffle(pool)
    attributes = sorted(pool[: int(rng.integers(0, 3))] + [decision_order[-1]])
    table_shape = tuple(id_card[a] for a in attributes)
    value_table = rng.uniform(-10.0, 10.0, size=table_shape)
    variables.append(Variable("value", VALUE))
    arcs += [(a, "value") for a in attributes]

    diagram = InfluenceDiagram(
        variables=tuple(variables),
        arcs=tuple(arcs),
        cpts=real_cpts,
        value_tables={"value": Factor(tuple(attributes), value_table)},
        decision_order=tuple(decision_order),
    )
    diagram = complete_memory_arcs(diagram)

    if rng.uniform() < evidence_probability:
        # Observe a chance variable that is not a decision parent (so the
        # observation is genuine background evidence) and not a decision
        # descendant (so its probability cannot depend on the policy).
        import networkx as nx

        graph = diagram.digraph()
        decision_parents = set()
        downstream = set()
        for d in decision_order:
            decision_parents.update(diagram.parents(d))
            downstream.update(nx.descendants(graph, d))
        candidates = [
            c for c in chance_ids if c not in decision_parents | downstream
        ]
        if candidates:
            observed = candidates[int(rng.integers(0, len(candidates)))]
            diagram = InfluenceDiagram(
                variables=diagram.variables,
                arcs=diagram.arcs,
                cpts=diagram.cpts,
                value_tables=diagram.value_tables,
                decision_order=diagram.decision_order,
                evidence={observed: int(rng.integers(0, 2))},
            )
    from idsolve import model as m

    if not m.validate(diagram).ok:
        return None
    return diagram


def random_belief_network(rng, max_vars=6):
    """Random chance-only diagram (no decisions, no value) for inference tests."""
    n = int(rng.integers(2, max_vars + 1))
    ids = [f"x{i}" for i in range(n)]
    variables = [Variable(v, CHANCE, ("f", "t")) for v in ids]
    arcs = []
    cpts = {}
    for i, var in enumerate(ids):
        pool = list(ids[:i])
        rng.shuffle(pool)
        parents = sorted(pool[: int(rng.integers(0, min(2, len(pool)) + 1))])
        arcs += [(p, var) for p in parents]
        raw = 0.05 + rng.uniform(size=tuple(2 for _ in parents) + (2,))
        cpts[var] = Factor(
            tuple(parents) + (var,), raw / raw.sum(axis=-1, keepdims=True)
        )
    return InfluenceDiagram(
        variables=tuple(variables), arcs=tuple(arcs), cpts=cpts, value_tables={}
    )


@pytest.fixture
def umbrella():
    return make_umbrella()


@pytest.fixture
def umbrella_tv():
    return make_umbrella_tv()


@pytest.fixture
def mdp2():
    return make_mdp_chain(periods=2, seed=7)


@pytest.fixture
def mdp3():
    return make_mdp_chain(periods=3, seed=11)
