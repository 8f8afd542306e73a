"""Exact inference by cluster-tree message passing.

Construction is the standard pipeline: moralize, triangulate with the
min-fill heuristic (ties broken by lowest variable id), take the maximal
elimination cliques and join them with a maximum-separator spanning tree.
Queries use a single collect sweep toward a covering cluster; evidence is
entered as indicator likelihood factors so table shapes are preserved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import UncoveredTable, VarNotInScope, ZeroEvidenceProbability
from .factors import Factor, indicator, ones, product


# -- graph construction ------------------------------------------------


def min_fill_order(adjacency: dict[str, set[str]]) -> list[str]:
    """Greedy min-fill elimination order; ties go to the lowest id.

    Mutates a copy of the adjacency, adding fill edges as it goes.
    """
    graph = {v: set(ns) for v, ns in adjacency.items()}
    order = []
    while graph:
        best = None
        best_cost = None
        for var in sorted(graph):
            ns = sorted(graph[var])
            cost = sum(
                1
                for i, a in enumerate(ns)
                for b in ns[i + 1 :]
                if b not in graph[a]
            )
            if best_cost is None or cost < best_cost:
                best, best_cost = var, cost
        order.append(best)
        ns = graph.pop(best)
        for a in ns:
            graph[a].discard(best)
            graph[a].update(b for b in ns if b != a)
    return order


def moral_adjacency(
    variables: Iterable[str], cliques: Iterable[Iterable[str]]
) -> dict[str, set[str]]:
    """Undirected graph in which every given variable group is a clique."""
    adjacency: dict[str, set[str]] = {v: set() for v in variables}
    for clique in cliques:
        group = list(clique)
        for i, a in enumerate(group):
            for b in group[i + 1 :]:
                adjacency[a].add(b)
                adjacency[b].add(a)
    return adjacency


def elimination_cliques(
    adjacency: dict[str, set[str]], order: Sequence[str]
) -> list[tuple[str, ...]]:
    """Clique formed at each elimination step ({var} plus live neighbors)."""
    graph = {v: set(ns) for v, ns in adjacency.items()}
    cliques = []
    for var in order:
        ns = graph.pop(var)
        cliques.append(tuple(sorted({var} | ns)))
        for a in ns:
            graph[a].discard(var)
            graph[a].update(b for b in ns if b != a)
    return cliques


@dataclass(frozen=True)
class ClusterTree:
    """Join tree over variable-set clusters.

    ``edges`` hold cluster indices; separators are the intersections.
    The tree invariants (running intersection, family coverage for the
    factors assigned to it) are established at construction and can be
    re-checked with :func:`check_tree`.
    """

    clusters: tuple[tuple[str, ...], ...]
    edges: tuple[tuple[int, int], ...]
    cards: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(self, "cards", dict(self.cards))

    def separator(self, i: int, j: int) -> tuple[str, ...]:
        return tuple(sorted(set(self.clusters[i]) & set(self.clusters[j])))

    def neighbors(self, i: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return out

    def containing(self, variables: Iterable[str]) -> list[int]:
        want = set(variables)
        return [
            i for i, c in enumerate(self.clusters) if want <= set(c)
        ]

    def smallest_containing(self, variables: Iterable[str]) -> int | None:
        hits = self.containing(variables)
        if not hits:
            return None
        return min(hits, key=lambda i: (len(self.clusters[i]), i))


def build_cluster_tree(
    cards: Mapping[str, int],
    families: Sequence[Iterable[str]],
    clique_constraints: Sequence[Iterable[str]] = (),
) -> ClusterTree:
    """Join tree covering every family, with each constraint inside a cluster."""
    variables = sorted(cards)
    adjacency = moral_adjacency(variables, list(families) + list(clique_constraints))
    order = min_fill_order(adjacency)
    cliques = elimination_cliques(adjacency, order)

    # Keep maximal cliques only, preserving creation order.
    maximal: list[tuple[str, ...]] = []
    for clique in cliques:
        if any(set(clique) <= set(kept) for kept in maximal):
            continue
        maximal = [kept for kept in maximal if not set(kept) < set(clique)]
        maximal.append(clique)

    # Maximum-separator spanning tree (Kruskal, deterministic ordering).
    n = len(maximal)
    candidates = sorted(
        (
            (-len(set(maximal[i]) & set(maximal[j])), i, j)
            for i in range(n)
            for j in range(i + 1, n)
        )
    )
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = []
    for _, i, j in candidates:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            edges.append((i, j))
    return ClusterTree(tuple(maximal), tuple(edges), dict(cards))


def check_tree(tree: ClusterTree, families: Sequence[Iterable[str]] = ()) -> None:
    """Assert family coverage and the running intersection property."""
    n = len(tree.clusters)
    if n and len(tree.edges) != n - 1:
        raise AssertionError("cluster graph is not a tree")
    for family in families:
        if tree.smallest_containing(family) is None:
            raise AssertionError(f"family {tuple(family)} fits no cluster")
    # Running intersection: clusters containing any variable form a subtree.
    for var in tree.cards:
        holders = {i for i, c in enumerate(tree.clusters) if var in c}
        if not holders:
            continue
        reached = {min(holders)}
        frontier = [min(holders)]
        while frontier:
            i = frontier.pop()
            for j in tree.neighbors(i):
                if j in holders and j not in reached:
                    reached.add(j)
                    frontier.append(j)
        if reached != holders:
            raise AssertionError(f"clusters containing {var} are not connected")


# -- potentials and messages ------------------------------------------


def assign_factors(
    tree: ClusterTree, factors: Sequence[Factor]
) -> dict[int, list[Factor]]:
    """Each table goes to the smallest covering cluster (ties: creation order)."""
    assignment: dict[int, list[Factor]] = {i: [] for i in range(len(tree.clusters))}
    for factor in factors:
        target = tree.smallest_containing(factor.scope)
        if target is None:
            raise UncoveredTable(f"no cluster covers scope {factor.scope}")
        assignment[target].append(factor)
    return assignment


def initialize_potentials(
    tree: ClusterTree, factors: Sequence[Factor]
) -> list[Factor]:
    """Per-cluster product of assigned tables; all-ones where nothing lands."""
    assignment = assign_factors(tree, factors)
    potentials = []
    for i, cluster in enumerate(tree.clusters):
        cluster_cards = tuple(tree.cards[v] for v in cluster)
        potential = ones(cluster, cluster_cards)
        for factor in assignment[i]:
            potential = potential.multiply(factor)
        potentials.append(potential)
    return potentials


@dataclass
class CollectStats:
    messages: int = 0
    max_cluster_size: int = 0


def collect(
    tree: ClusterTree,
    potentials: Sequence[Factor],
    target: int,
    stats: CollectStats | None = None,
) -> Factor:
    """Single sweep of messages from the leaves toward ``target``.

    Returns the collected potential: the posterior joint measure over the
    target cluster's variables and the entered evidence.
    """
    if stats is None:
        stats = CollectStats()

    def message(source: int, sink: int) -> Factor:
        potential = potentials[source]
        for neighbor in tree.neighbors(source):
            if neighbor != sink:
                potential = potential.multiply(message(neighbor, source))
        stats.messages += 1
        stats.max_cluster_size = max(stats.max_cluster_size, len(potential.scope))
        separator = set(tree.separator(source, sink))
        return potential.sum_out([v for v in potential.scope if v not in separator])

    result = potentials[target]
    for neighbor in tree.neighbors(target):
        result = result.multiply(message(neighbor, target))
    stats.max_cluster_size = max(stats.max_cluster_size, len(result.scope))
    return result


def evidence_factors(evidence: Mapping[str, int], cards: Mapping[str, int]) -> list[Factor]:
    return [indicator(var, cards[var], idx) for var, idx in sorted(evidence.items())]


def marginal(
    tree: ClusterTree,
    potentials: Sequence[Factor],
    query: Iterable[str],
    stats: CollectStats | None = None,
) -> tuple[Factor, float]:
    """Posterior over the query set plus the evidence mass it was scaled by.

    The query must fit inside some cluster; callers re-build the tree with
    the query as a clique constraint when it does not.
    """
    query = tuple(query)
    target = tree.smallest_containing(query)
    if target is None:
        raise VarNotInScope(f"query {query} fits no cluster")
    joint = collect(tree, potentials, target, stats)
    joint = joint.sum_out([v for v in joint.scope if v not in query])
    mass = joint.total()
    if mass == 0.0:
        raise ZeroEvidenceProbability("observed evidence has probability zero")
    return joint.normalized(), mass


# -- DOT emission -----------------------------------------------------


def to_dot(tree: ClusterTree) -> str:
    lines = ["graph cluster_tree {", "  node [shape=ellipse];"]
    for i, cluster in enumerate(tree.clusters):
        label = ",".join(cluster) if cluster else "∅"
        lines.append(f'  c{i} [label="{label}"];')
    for i, j in tree.edges:
        label = ",".join(tree.separator(i, j))
        lines.append(f'  c{i} -- c{j} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
