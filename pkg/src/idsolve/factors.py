"""Dense table algebra over named discrete variables.

A :class:`Factor` is a real-valued array indexed by an ordered variable
scope, stored row-major with the last variable fastest.  All solver
backends are built on four operations: product, sum-marginalization,
max-marginalization (with argmax bookkeeping) and evidence reduction.

Factors carry a ``semantics`` tag.  Probabilities and likelihoods must be
nonnegative; utilities are rescaled probabilities; valuations are
unnormalized real measures and may be negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import CardinalityMismatch, IndexOutOfRange, VarNotInScope

PROBABILITY = "probability"
LIKELIHOOD = "likelihood"
UTILITY = "utility"
VALUATION = "valuation"

# Joining rule for products: the "least probabilistic" tag wins.
_RANK = {PROBABILITY: 0, LIKELIHOOD: 1, UTILITY: 2, VALUATION: 3}


def _join_semantics(a: str, b: str) -> str:
    return a if _RANK[a] >= _RANK[b] else b


@dataclass(frozen=True)
class ArgmaxTable:
    """Maximizing configurations recorded by :meth:`Factor.max_out`.

    ``flat`` holds, for each retained configuration, the row-major flat
    index into the eliminated variables (ties resolved to the lowest
    index, i.e. lexicographically smallest eliminated configuration).
    """

    scope: tuple[str, ...]
    cards: tuple[int, ...]
    eliminated: tuple[str, ...]
    eliminated_cards: tuple[int, ...]
    flat: np.ndarray

    def assignment(self, index: tuple[int, ...]) -> dict[str, int]:
        """Maximizing eliminated configuration for one retained config."""
        coords = np.unravel_index(int(self.flat[index]), self.eliminated_cards)
        return dict(zip(self.eliminated, (int(c) for c in coords)))


@dataclass(frozen=True)
class Factor:
    scope: tuple[str, ...]
    values: np.ndarray
    semantics: str = PROBABILITY

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != len(self.scope):
            raise ValueError(
                f"scope {self.scope} does not match array of rank {values.ndim}"
            )
        if len(set(self.scope)) != len(self.scope):
            raise ValueError(f"duplicate variable in scope {self.scope}")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "scope", tuple(self.scope))
        object.__setattr__(self, "values", values)

    # -- inspection ----------------------------------------------------

    @property
    def cards(self) -> tuple[int, ...]:
        return self.values.shape

    def card(self, var: str) -> int:
        return self.values.shape[self.scope.index(var)]

    def total(self) -> float:
        return float(self.values.sum())

    def aligned_values(self, scope: Iterable[str]) -> np.ndarray:
        """Values transposed into the given scope order (a permutation)."""
        scope = tuple(scope)
        if set(scope) != set(self.scope) or len(scope) != len(self.scope):
            raise VarNotInScope(f"{scope} is not a permutation of {self.scope}")
        return self.values.transpose([self.scope.index(v) for v in scope])

    # -- algebra -------------------------------------------------------

    def _broadcast_to(self, union: tuple[str, ...]) -> np.ndarray:
        axes = [self.scope.index(v) for v in union if v in self.scope]
        arr = self.values.transpose(axes)
        shape = [self.card(v) if v in self.scope else 1 for v in union]
        return arr.reshape(shape)

    def multiply(self, other: "Factor") -> "Factor":
        for var in other.scope:
            if var in self.scope and self.card(var) != other.card(var):
                raise CardinalityMismatch(
                    f"{var}: {self.card(var)} vs {other.card(var)}"
                )
        union = self.scope + tuple(v for v in other.scope if v not in self.scope)
        values = self._broadcast_to(union) * other._broadcast_to(union)
        return Factor(union, values, _join_semantics(self.semantics, other.semantics))

    __mul__ = multiply

    def add(self, other: "Factor") -> "Factor":
        """Entrywise sum over the union scope (used for merged value tables)."""
        for var in other.scope:
            if var in self.scope and self.card(var) != other.card(var):
                raise CardinalityMismatch(
                    f"{var}: {self.card(var)} vs {other.card(var)}"
                )
        union = self.scope + tuple(v for v in other.scope if v not in self.scope)
        shape = tuple(
            self.card(v) if v in self.scope else other.card(v) for v in union
        )
        a = np.broadcast_to(self._broadcast_to(union), shape)
        b = np.broadcast_to(other._broadcast_to(union), shape)
        return Factor(union, a + b, _join_semantics(self.semantics, other.semantics))

    def scale(self, alpha: float) -> "Factor":
        return Factor(self.scope, self.values * alpha, self.semantics)

    # -- marginalization ----------------------------------------------

    def _split(self, variables: Iterable[str]) -> tuple[tuple[str, ...], tuple[int, ...]]:
        drop = tuple(variables)
        for var in drop:
            if var not in self.scope:
                raise VarNotInScope(f"{var} not in scope {self.scope}")
        if len(set(drop)) != len(drop):
            raise VarNotInScope(f"duplicate variables in {drop}")
        keep = tuple(v for v in self.scope if v not in drop)
        axes = tuple(self.scope.index(v) for v in drop)
        return keep, axes

    def sum_out(self, variables: Iterable[str]) -> "Factor":
        keep, axes = self._split(variables)
        if not axes:
            return self
        return Factor(keep, self.values.sum(axis=axes), self.semantics)

    def max_out(self, variables: Iterable[str]) -> tuple["Factor", ArgmaxTable]:
        drop = tuple(variables)
        keep, _ = self._split(drop)
        # Order eliminated variables as in scope so the flat argmax index is
        # lexicographic and np.argmax's first-hit rule breaks ties low.
        drop = tuple(v for v in self.scope if v in drop)
        keep_cards = tuple(self.card(v) for v in keep)
        drop_cards = tuple(self.card(v) for v in drop)
        moved = self.aligned_values(keep + drop).reshape(
            keep_cards + (int(np.prod(drop_cards, dtype=int)),)
        )
        flat = np.argmax(moved, axis=-1)
        values = np.take_along_axis(moved, flat[..., None], axis=-1)[..., 0]
        table = ArgmaxTable(keep, keep_cards, drop, drop_cards, flat)
        return Factor(keep, values, self.semantics), table

    def reduce(self, evidence: Mapping[str, int]) -> "Factor":
        """Slice out observed variables, dropping them from the scope."""
        for var, idx in evidence.items():
            if var not in self.scope:
                raise VarNotInScope(f"{var} not in scope {self.scope}")
            if not 0 <= idx < self.card(var):
                raise IndexOutOfRange(f"{var}={idx} with cardinality {self.card(var)}")
        if not evidence:
            return self
        index = tuple(
            evidence[v] if v in evidence else slice(None) for v in self.scope
        )
        keep = tuple(v for v in self.scope if v not in evidence)
        return Factor(keep, self.values[index], self.semantics)

    def normalized(self) -> "Factor":
        total = self.total()
        if total == 0.0:
            raise ZeroDivisionError("cannot normalize an all-zero factor")
        return Factor(self.scope, self.values / total, self.semantics)


def ones(scope: tuple[str, ...], cards: tuple[int, ...], semantics: str = PROBABILITY) -> Factor:
    return Factor(scope, np.ones(cards), semantics)


def indicator(var: str, card: int, index: int, semantics: str = LIKELIHOOD) -> Factor:
    """Evidence as a 0/1 likelihood over a single variable."""
    if not 0 <= index < card:
        raise IndexOutOfRange(f"{var}={index} with cardinality {card}")
    values = np.zeros(card)
    values[index] = 1.0
    return Factor((var,), values, semantics)


def product(factors: Iterable[Factor]) -> Factor:
    result = None
    for factor in factors:
        result = factor if result is None else result.multiply(factor)
    if result is None:
        return Factor((), np.asarray(1.0).reshape(()), PROBABILITY)
    return result
