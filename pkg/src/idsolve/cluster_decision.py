"""Decision evaluation inside cluster trees.

Two families of backends live here.  ``solve_by_clustering`` collects to
each decision's cluster in reverse order, extracts the policy from the
cluster potential, installs it as a deterministic CPT, and repeats; it
works on the rescaled network, on the valuation network (value carried
as an extra binary variable in original units), or with the raw value
table treated as a likelihood.  ``build_one_directional_tree`` plus
``single_pass_solve`` evaluate the whole problem in one rooted sweep:
every cluster sends exactly one message toward the root, maximizing over
decisions before summing over chance variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import inference, transform
from .errors import (
    DegenerateValue,
    NegativeFactor,
    NegativeWeight,
    OneDirectionalCheckFailed,
    ZeroEvidenceProbability,
)
from .factors import Factor, LIKELIHOOD
from .inference import ClusterTree, CollectStats, collect
from .model import InfluenceDiagram
from .policy_queries import (
    DecisionRule,
    EvaluationResult,
    degenerate_result,
    finish_result,
    network_factors,
)
from .transform import BeliefNetwork, DecisionNetwork

MODES = ("rescaled", "valuation", "likelihood")


def decision_from_cluster(
    potential: Factor,
    decision: str,
    alternatives: Sequence[str],
    keep: Sequence[str] = (),
    value_variable: str | None = None,
    valuation: bool = False,
) -> DecisionRule:
    """Optimal policy from a cluster potential over {decision} ∪ keep ∪ z.

    Extra variables z are summed out.  When the synthetic value variable
    is in scope, the score is its index-1 slice (the value-weighted
    mass); ties break to the lowest alternative index.  The probability
    weight (index-0 slice for valuations, the full mass otherwise) must
    be nonnegative; configurations with zero weight carry no probability
    and get alternative 0.
    """
    if value_variable is not None and value_variable in potential.scope:
        score = potential.reduce({value_variable: 1})
        if valuation:
            weight = potential.reduce({value_variable: 0})
        else:
            weight = potential.sum_out([value_variable])
    else:
        score = potential
        weight = potential

    keep = tuple(v for v in keep if v in score.scope)
    drop = [v for v in score.scope if v not in keep and v != decision]
    score = score.sum_out(drop)
    weight = weight.sum_out([v for v in weight.scope if v not in keep and v != decision])
    if np.any(weight.values < -1e-12):
        raise NegativeWeight(
            f"negative probability weight while extracting policy for {decision}"
        )

    axes = keep + (decision,)
    scores = score.aligned_values(axes)
    weights = np.clip(weight.aligned_values(axes), 0.0, None)
    choices = np.argmax(scores, axis=-1)
    undetermined = weights.sum(axis=-1) == 0.0
    choices = np.where(undetermined, 0, choices)
    return DecisionRule(
        decision=decision,
        scope=keep,
        cards=scores.shape[:-1],
        alternatives=tuple(alternatives),
        choices=choices,
        undetermined=undetermined,
    )


# -- backend B: iterated collects to decision clusters -----------------


def _decision_tree(net: DecisionNetwork, include_value: bool) -> ClusterTree:
    families = [cpt.scope for cpt in net.cpts.values()]
    tail = (net.synthetic_variable,) if include_value else ()
    constraints = [(spec.id,) + spec.scope + tail for spec in net.decisions]
    return inference.build_cluster_tree(net.cards, families, constraints)


def _likelihood_tree(net: DecisionNetwork, value_factors: Sequence[Factor]) -> ClusterTree:
    synthetic = net.synthetic_variable
    cards = {v: c for v, c in net.cards.items() if v != synthetic}
    families = [
        cpt.scope for var, cpt in net.cpts.items() if var != synthetic
    ] + [f.scope for f in value_factors]
    constraints = [(spec.id,) + spec.scope for spec in net.decisions]
    return inference.build_cluster_tree(cards, families, constraints)


def _collect_to(tree, potentials, query, stats):
    target = tree.smallest_containing(query)
    if target is None:
        raise AssertionError(f"query {query} fits no cluster")
    return collect(tree, potentials, target, stats)


def solve_by_clustering(
    diagram: InfluenceDiagram,
    mode: str = "rescaled",
    use_full_information: bool = False,
    prune_barren: bool = True,
    value_factors: Sequence[Factor] | None = None,
) -> EvaluationResult:
    """Backward policy extraction from decision-cluster potentials.

    ``mode`` selects how the value enters the tree: ``rescaled`` turns it
    into a probability, ``valuation`` carries it in original units as a
    binary variable, ``likelihood`` multiplies the raw table in like an
    observation and normalizes by a separately computed evidence mass.
    ``value_factors`` optionally replaces the merged value table with an
    equivalent product of local nonnegative tables (likelihood mode only).
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "rescaled":
        try:
            net = transform.to_belief_network(
                diagram,
                use_full_information=use_full_information,
                prune_barren=prune_barren,
            )
        except DegenerateValue as exc:
            return degenerate_result(diagram, exc.value, "cluster")
    else:
        net = transform.to_valuation_network(
            diagram,
            use_full_information=use_full_information,
            prune_barren=prune_barren,
        )

    if mode == "likelihood":
        return _solve_likelihood(diagram, net, value_factors)
    if value_factors is not None:
        raise ValueError("value_factors is only meaningful in likelihood mode")

    synthetic = net.synthetic_variable
    tree = _decision_tree(net, include_value=(mode == "valuation"))
    stats = CollectStats()
    rules: dict[str, DecisionRule] = {}
    policy_cpts: dict[str, Factor] = {}
    clamp = [inference.indicator(synthetic, 2, 1)] if mode == "rescaled" else []
    for spec in reversed(net.decisions):
        factors = network_factors(net, policy_cpts, extra=clamp)
        potentials = inference.initialize_potentials(tree, factors)
        query = (spec.id,) + spec.scope
        if mode == "valuation":
            query = query + (synthetic,)
        potential = _collect_to(tree, potentials, query, stats)
        rule = decision_from_cluster(
            potential,
            spec.id,
            spec.alternatives,
            keep=spec.scope,
            value_variable=synthetic,
            valuation=(mode == "valuation"),
        )
        rules[spec.id] = rule
        policy_cpts[spec.id] = rule.to_cpt()

    factors = network_factors(net, policy_cpts)
    potentials = inference.initialize_potentials(tree, factors)
    joint = _collect_to(tree, potentials, (synthetic,), stats)
    joint = joint.sum_out([v for v in joint.scope if v != synthetic])
    v0, v1 = float(joint.values[0]), float(joint.values[1])
    if mode == "valuation":
        p_evidence = v0
        if p_evidence == 0.0:
            raise ZeroEvidenceProbability("observed evidence has probability zero")
        mev = v1 / p_evidence
    else:
        p_evidence = v0 + v1
        if p_evidence == 0.0:
            raise ZeroEvidenceProbability("observed evidence has probability zero")
        v_min, v_max = net.scale
        mev = v_min + (v_max - v_min) * (v1 / p_evidence)
    return finish_result(
        diagram,
        rules,
        mev,
        net.scale,
        p_evidence,
        {
            "backend": "cluster",
            "mode": mode,
            "root_slices": [v0, v1],
            "messages": stats.messages,
            "max_cluster_size": stats.max_cluster_size,
            "clusters": [list(c) for c in tree.clusters],
        },
    )


def _solve_likelihood(diagram, net, value_factors):
    synthetic = net.synthetic_variable
    if value_factors is None:
        value_factors = [net.value_factor]
    value_factors = [
        Factor(f.scope, f.values, LIKELIHOOD) for f in value_factors
    ]
    for f in value_factors:
        if np.any(f.values < 0):
            raise NegativeFactor(
                "likelihood mode needs nonnegative value tables"
            )
    tree = _likelihood_tree(net, value_factors)
    stats = CollectStats()
    rules: dict[str, DecisionRule] = {}
    policy_cpts: dict[str, Factor] = {}
    for spec in reversed(net.decisions):
        factors = network_factors(
            net, policy_cpts, extra=value_factors, skip=(synthetic,)
        )
        potentials = inference.initialize_potentials(tree, factors)
        potential = _collect_to(tree, potentials, (spec.id,) + spec.scope, stats)
        rule = decision_from_cluster(
            potential, spec.id, spec.alternatives, keep=spec.scope
        )
        rules[spec.id] = rule
        policy_cpts[spec.id] = rule.to_cpt()

    factors = network_factors(net, policy_cpts, extra=value_factors, skip=(synthetic,))
    potentials = inference.initialize_potentials(tree, factors)
    mass = collect(tree, potentials, 0, stats).total()
    # Second, value-free pass for the evidence normalizer.
    plain = network_factors(net, policy_cpts, skip=(synthetic,))
    p_evidence = collect(tree, inference.initialize_potentials(tree, plain), 0, stats).total()
    if p_evidence == 0.0:
        raise ZeroEvidenceProbability("observed evidence has probability zero")
    return finish_result(
        diagram,
        rules,
        mass / p_evidence,
        net.scale,
        p_evidence,
        {
            "backend": "cluster",
            "mode": "likelihood",
            "messages": stats.messages,
            "max_cluster_size": stats.max_cluster_size,
            "clusters": [list(c) for c in tree.clusters],
        },
    )


# -- backend C: one-directional rooted trees ---------------------------


@dataclass(frozen=True)
class RootedClusterTree:
    """Cluster tree with directed edges: every cluster sends to at most
    one child, the unique childless cluster is the root, and each
    decision has a designated cluster holding {D} ∪ R (plus the
    synthetic value variable)."""

    clusters: tuple[tuple[str, ...], ...]
    child: tuple[int | None, ...]
    root: int
    decision_cluster: Mapping[str, int]
    cards: Mapping[str, int]
    value_variable: str | None
    network: DecisionNetwork

    def __post_init__(self):
        object.__setattr__(self, "decision_cluster", dict(self.decision_cluster))
        object.__setattr__(self, "cards", dict(self.cards))

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (i, j) for i, j in enumerate(self.child) if j is not None
        )

    def separator(self, i: int) -> tuple[str, ...]:
        j = self.child[i]
        return tuple(sorted(set(self.clusters[i]) & set(self.clusters[j])))

    def as_cluster_tree(self) -> ClusterTree:
        return ClusterTree(self.clusters, self.edges, dict(self.cards))

    def path_to_root(self, start: int) -> list[int]:
        path = [start]
        while self.child[path[-1]] is not None:
            path.append(self.child[path[-1]])
            if len(path) > len(self.clusters):
                raise OneDirectionalCheckFailed("child pointers contain a cycle")
        return path


def check_one_directional(tree: RootedClusterTree) -> None:
    """Verify the structural conditions; raise instead of assuming them."""
    n = len(tree.clusters)
    if tree.child[tree.root] is not None:
        raise OneDirectionalCheckFailed("root has a child")
    for i in range(n):
        if i != tree.root and tree.child[i] is None:
            raise OneDirectionalCheckFailed(f"cluster {i} is childless but not root")
        if tree.path_to_root(i)[-1] != tree.root:
            raise OneDirectionalCheckFailed(f"cluster {i} does not reach the root")

    value = tree.value_variable
    root_scope = set(tree.clusters[tree.root])
    if not root_scope <= ({value} if value else set()):
        raise OneDirectionalCheckFailed(
            f"root scope {sorted(root_scope)} is neither empty nor the value variable"
        )

    try:
        families = [cpt.scope for cpt in tree.network.cpts.values()]
        inference.check_tree(tree.as_cluster_tree(), families)
    except AssertionError as exc:
        raise OneDirectionalCheckFailed(str(exc)) from exc

    # Value must never be summed away at a boundary: a value-carrying
    # cluster's child carries it too (the root observes it at the end).
    if value is not None:
        for i, j in tree.edges:
            if value in tree.clusters[i] and value not in tree.clusters[j]:
                raise OneDirectionalCheckFailed(
                    f"value variable dropped on edge {i}->{j}"
                )

    specs = tree.network.decisions
    for spec in specs:
        c = tree.decision_cluster.get(spec.id)
        if c is None:
            raise OneDirectionalCheckFailed(f"no designated cluster for {spec.id}")
        scope = set(tree.clusters[c])
        if not ({spec.id} | set(spec.scope)) <= scope:
            raise OneDirectionalCheckFailed(
                f"designated cluster for {spec.id} misses its scope"
            )
        j = tree.child[c]
        if j is not None and spec.id in tree.clusters[j]:
            raise OneDirectionalCheckFailed(
                f"child of {spec.id}'s cluster still contains it"
            )
    if specs:
        last = specs[-1].id
        path = tree.path_to_root(tree.decision_cluster[last])
        position = {c: k for k, c in enumerate(path)}
        previous = position[tree.decision_cluster[last]]
        for spec in reversed(specs[:-1]):
            c = tree.decision_cluster[spec.id]
            if c not in position:
                raise OneDirectionalCheckFailed(
                    f"{spec.id}'s cluster is off the root path"
                )
            if position[c] < previous:
                raise OneDirectionalCheckFailed(
                    "decision clusters out of reverse decision order"
                )
            previous = position[c]


def _elimination_groups(net: DecisionNetwork) -> list[list[str]]:
    """Reverse temporal grouping: never-observed chance first, then the
    last decision, then what it alone observed, ..., then the rest."""
    decisions = [spec.id for spec in net.decisions]
    info = {spec.id: set(spec.information) for spec in net.decisions}
    remaining = {v.id for v in net.variables if v.id != net.synthetic_variable}
    observed = set().union(*info.values()) if info else set()
    groups: list[list[str]] = []

    first = sorted(remaining - observed - set(decisions))
    groups.append(first)
    remaining -= set(first)
    for k in range(len(decisions) - 1, -1, -1):
        decision = decisions[k]
        groups.append([decision])
        remaining.discard(decision)
        earlier = info[decisions[k - 1]] if k > 0 else set()
        group = sorted((info[decision] - earlier - set(decisions)) & remaining)
        groups.append(group)
        remaining -= set(group)
    groups.append(sorted(remaining))
    return [g for g in groups if g]


def _constrained_elimination(net: DecisionNetwork):
    """Eliminate within the reverse-temporal groups (min-fill inside each),
    returning the order and the clique formed at every step."""
    synthetic = net.synthetic_variable
    cliques_in = [cpt.scope for cpt in net.cpts.values()]
    # Keep each decision next to its scope and the value variable so the
    # designated cluster holds everything policy extraction needs.
    cliques_in += [(spec.id,) + spec.scope + (synthetic,) for spec in net.decisions]
    graph = inference.moral_adjacency([v.id for v in net.variables], cliques_in)

    order: list[str] = []
    cliques: list[tuple[str, ...]] = []
    for group in _elimination_groups(net):
        pending = set(group)
        while pending:
            best, best_cost = None, None
            for var in sorted(pending):
                ns = sorted(graph[var])
                cost = sum(
                    1
                    for a_i, a in enumerate(ns)
                    for b in ns[a_i + 1 :]
                    if b not in graph[a]
                )
                if best_cost is None or cost < best_cost:
                    best, best_cost = var, cost
            pending.discard(best)
            neighbors = graph.pop(best)
            order.append(best)
            cliques.append(tuple(sorted({best} | neighbors)))
            for a in neighbors:
                graph[a].discard(best)
                graph[a].update(b for b in neighbors if b != a)
    return order, cliques


def _bucket_tree(net, order, cliques):
    """Each elimination clique sends to the cluster of the first-eliminated
    remaining member; a fresh root cluster holds the value variable."""
    synthetic = net.synthetic_variable
    position = {v: k for k, v in enumerate(order)}
    root_scope = (synthetic,) if synthetic else ()
    clusters = list(cliques) + [root_scope]
    root = len(cliques)
    child: list[int | None] = []
    for k, clique in enumerate(cliques):
        rest = [position[v] for v in clique if v in position and position[v] > k]
        child.append(min(rest) if rest else root)
    child.append(None)
    decision_cluster = {spec.id: position[spec.id] for spec in net.decisions}
    return clusters, child, root, decision_cluster


def _chain_tree(net, order, cliques):
    """Fallback: a single chain in elimination order; cluster k holds every
    already-touched, still-alive variable, so each hop drops exactly one."""
    synthetic = net.synthetic_variable
    alive: set[str] = set()
    clusters: list[tuple[str, ...]] = []
    for k, clique in enumerate(cliques):
        alive |= set(clique)
        clusters.append(tuple(sorted(alive)))
        alive.discard(order[k])
    root_scope = (synthetic,) if synthetic else ()
    clusters.append(root_scope)
    root = len(clusters) - 1
    child: list[int | None] = [k + 1 for k in range(len(cliques))] + [None]
    position = {v: k for k, v in enumerate(order)}
    decision_cluster = {spec.id: position[spec.id] for spec in net.decisions}
    return clusters, child, root, decision_cluster


def _absorb(clusters, child, root, decision_cluster):
    """Merge subset-related neighbors, keeping designated clusters and the
    root intact, then compact indices."""
    clusters = list(clusters)
    child = list(child)
    protected = set(decision_cluster.values()) | {root}
    alive = [True] * len(clusters)

    changed = True
    while changed:
        changed = False
        for i in range(len(clusters)):
            if not alive[i] or child[i] is None:
                continue
            j = child[i]
            si, sj = set(clusters[i]), set(clusters[j])
            if si <= sj and i not in protected:
                # fold i into its child
                for k in range(len(clusters)):
                    if alive[k] and child[k] == i:
                        child[k] = j
                alive[i] = False
                changed = True
            elif sj < si and j not in protected:
                # pull the smaller child into i
                child[i] = child[j]
                for k in range(len(clusters)):
                    if alive[k] and k != i and child[k] == j:
                        child[k] = i
                alive[j] = False
                changed = True

    index = {}
    for k in range(len(clusters)):
        if alive[k]:
            index[k] = len(index)
    new_clusters = tuple(tuple(clusters[k]) for k in sorted(index))
    new_child = tuple(
        None if child[k] is None else index[child[k]] for k in sorted(index)
    )
    new_root = index[root]
    new_map = {d: index[c] for d, c in decision_cluster.items()}
    return new_clusters, new_child, new_root, new_map


def build_one_directional_tree(
    diagram: InfluenceDiagram,
    mode: str = "valuation",
    use_full_information: bool = False,
    prune_barren: bool = True,
    absorb: bool = True,
    shape: str = "auto",
) -> RootedClusterTree:
    """Rooted one-directional tree for the single-pass backend.

    Builds the converted network, eliminates variables in reverse
    temporal groups, links elimination cliques into a bucket tree
    (optionally compacted by absorbing subset neighbors), and verifies
    the structural conditions; if the bucket shape fails them, a chain
    in elimination order is used instead.  ``shape`` forces one of the
    two constructions ("bucket" or "chain") instead of the fallback
    behavior.
    """
    if mode == "rescaled":
        net = transform.to_belief_network(
            diagram, use_full_information=use_full_information, prune_barren=prune_barren
        )
    elif mode == "valuation":
        net = transform.to_valuation_network(
            diagram, use_full_information=use_full_information, prune_barren=prune_barren
        )
    else:
        raise ValueError(f"mode must be 'valuation' or 'rescaled', got {mode!r}")
    order, cliques = _constrained_elimination(net)

    def assemble(builder):
        parts = builder(net, order, cliques)
        if absorb:
            parts = _absorb(*parts)
        clusters, child, root, decision_cluster = parts
        return RootedClusterTree(
            clusters=tuple(tuple(c) for c in clusters),
            child=tuple(child),
            root=root,
            decision_cluster=decision_cluster,
            cards=net.cards,
            value_variable=net.synthetic_variable,
            network=net,
        )

    if shape == "chain":
        tree = assemble(_chain_tree)
        check_one_directional(tree)
        return tree
    tree = assemble(_bucket_tree)
    try:
        check_one_directional(tree)
        return tree
    except OneDirectionalCheckFailed:
        if shape == "bucket":
            raise
        tree = assemble(_chain_tree)
        check_one_directional(tree)
        return tree


def single_pass_solve(
    tree: RootedClusterTree, diagram: InfluenceDiagram | None = None
) -> EvaluationResult:
    """Evaluate the whole problem with one message per edge.

    Messages flow leaves-to-root.  Whenever a cluster drops variables
    not in its child's separator, decision variables are handled first —
    the policy is read off the potential, installed, and the decision
    summed under it, which equals max-marginalization — and chance
    variables are summed afterwards.  The root recovers MEV from the two
    value slices.
    """
    check_one_directional(tree)
    net = tree.network
    synthetic = net.synthetic_variable
    rescaled = isinstance(net, BeliefNetwork)
    specs = {spec.id: spec for spec in net.decisions}
    cluster_decisions: dict[int, list[str]] = {}
    for spec in net.decisions:
        cluster_decisions.setdefault(tree.decision_cluster[spec.id], []).append(spec.id)

    factors = network_factors(net, {})
    assignment = inference.assign_factors(tree.as_cluster_tree(), factors)
    potentials = []
    for i, cluster in enumerate(tree.clusters):
        pot = inference.ones(cluster, tuple(tree.cards[v] for v in cluster))
        for f in assignment[i]:
            pot = pot.multiply(f)
        potentials.append(pot)

    # Leaves-to-root topological order over the child pointers.
    order = sorted(
        range(len(tree.clusters)), key=lambda i: -len(tree.path_to_root(i))
    )

    inbox: dict[int, list[Factor]] = {i: [] for i in range(len(tree.clusters))}
    rules: dict[str, DecisionRule] = {}
    operations: list[list[tuple[str, str]]] = []
    messages = 0
    reverse_order = [spec.id for spec in reversed(net.decisions)]
    root_potential = None
    for i in order:
        pot = potentials[i]
        for message in inbox[i]:
            pot = pot.multiply(message)
        if i == tree.root:
            root_potential = pot
            continue
        separator = set(tree.clusters[i]) & set(tree.clusters[tree.child[i]])
        dropped = [v for v in pot.scope if v not in separator]
        ops: list[tuple[str, str]] = []
        for decision in reverse_order:
            if decision not in dropped:
                continue
            if tree.decision_cluster[decision] != i:
                raise OneDirectionalCheckFailed(
                    f"{decision} dropped outside its designated cluster"
                )
            spec = specs[decision]
            rule = decision_from_cluster(
                pot,
                decision,
                spec.alternatives,
                keep=spec.scope,
                value_variable=synthetic,
                valuation=not rescaled,
            )
            rules[decision] = rule
            pot = pot.multiply(rule.to_cpt()).sum_out([decision])
            ops.append((decision, "max"))
        chance = [v for v in dropped if v not in rules]
        if chance:
            pot = pot.sum_out(chance)
            ops.extend((v, "sum") for v in chance)
        operations.append(ops)
        inbox[tree.child[i]].append(pot)
        messages += 1

    if messages != len(tree.edges):
        raise AssertionError("single pass sent an unexpected number of messages")

    joint = root_potential.sum_out(
        [v for v in root_potential.scope if v != synthetic]
    )
    if synthetic not in joint.scope:
        raise AssertionError("root lost the value variable")
    v0, v1 = float(joint.values[0]), float(joint.values[1])
    # The uniform decision priors stay in the potentials while policies
    # select a single branch, so the collected mass is low by 1/N per
    # decision; undo that before reporting the evidence probability.
    prior_weight = 1.0
    for spec in net.decisions:
        prior_weight *= len(spec.alternatives)
    if rescaled:
        mass = v0 + v1
        if mass == 0.0:
            raise ZeroEvidenceProbability("observed evidence has probability zero")
        v_min, v_max = net.scale
        mev = v_min + (v_max - v_min) * (v1 / mass)
        p_evidence = mass * prior_weight
    else:
        if v0 == 0.0:
            raise ZeroEvidenceProbability("observed evidence has probability zero")
        mev = v1 / v0
        p_evidence = v0 * prior_weight

    diagnostics = {
        "backend": "onedir",
        "mode": "rescaled" if rescaled else "valuation",
        "root_slices": [v0, v1],
        "prior_weight": prior_weight,
        "messages": messages,
        "operations": operations,
        "clusters": [list(c) for c in tree.clusters],
    }
    if diagram is not None:
        return finish_result(diagram, rules, mev, net.scale, p_evidence, diagnostics)
    policies = tuple(rules[spec.id] for spec in net.decisions)
    v_min, v_max = net.scale
    meu = (mev - v_min) / (v_max - v_min) if v_max > v_min else None
    return EvaluationResult(
        policies=policies,
        mev=mev,
        meu=meu,
        evidence_probability=p_evidence,
        diagnostics=diagnostics,
    )


def solve_one_directional(
    diagram: InfluenceDiagram,
    mode: str = "valuation",
    use_full_information: bool = False,
    prune_barren: bool = True,
    absorb: bool = True,
) -> EvaluationResult:
    """Build a one-directional tree for the diagram and solve in one pass."""
    try:
        tree = build_one_directional_tree(
            diagram,
            mode=mode,
            use_full_information=use_full_information,
            prune_barren=prune_barren,
            absorb=absorb,
        )
    except DegenerateValue as exc:
        return degenerate_result(diagram, exc.value, "onedir")
    return single_pass_solve(tree, diagram)


def rooted_to_dot(tree: RootedClusterTree) -> str:
    """DOT of the rooted tree; edges annotated with the max/sum operations
    the sending cluster performs."""
    lines = ["digraph rooted_cluster_tree {", "  node [shape=ellipse];"]
    decisions = {spec.id for spec in tree.network.decisions}
    for i, cluster in enumerate(tree.clusters):
        label = ",".join(cluster) if cluster else "∅"
        shape = ' peripheries=2' if i == tree.root else ""
        lines.append(f'  c{i} [label="{label}"{shape}];')
    for i, j in tree.edges:
        separator = set(tree.clusters[i]) & set(tree.clusters[j])
        dropped = [v for v in tree.clusters[i] if v not in separator]
        parts = [f"max {v}" for v in dropped if v in decisions]
        parts += [f"sum {v}" for v in dropped if v not in decisions]
        lines.append(f'  c{i} -> c{j} [label="{"; ".join(parts)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
