import numpy as np
import pytest

from idsolve.errors import CardinalityMismatch, IndexOutOfRange, VarNotInScope
from idsolve.factors import (
    Factor,
    LIKELIHOOD,
    PROBABILITY,
    VALUATION,
    indicator,
    ones,
    product,
)


def factors_close(a, b, tol=1e-12):
    assert set(a.scope) == set(b.scope)
    return np.allclose(a.values, b.aligned_values(a.scope), atol=tol, rtol=0)


class TestMultiply:
    def test_identity(self):
        f = Factor(("A", "B"), [[0.1, 0.2], [0.3, 0.4]])
        assert factors_close(f * ones(("A", "B"), (2, 2)), f)

    def test_hand_example(self):
        f = Factor(("A",), [0.3, 0.7])
        g = Factor(("A", "B"), [[0.5, 0.5], [0.2, 0.8]])
        expected = [[0.15, 0.15], [0.14, 0.56]]
        assert np.allclose((f * g).values, expected)

    def test_disjoint_scopes_outer_product(self):
        f = Factor(("A",), [2.0, 3.0])
        g = Factor(("B",), [5.0, 7.0])
        h = f * g
        assert h.scope == ("A", "B")
        assert np.allclose(h.values, [[10.0, 14.0], [15.0, 21.0]])

    def test_cardinality_mismatch(self):
        with pytest.raises(CardinalityMismatch):
            Factor(("A",), [1.0, 2.0]) * Factor(("A",), [1.0, 2.0, 3.0])

    def test_commutative_associative(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            f = Factor(("A", "B"), rng.uniform(size=(2, 3)))
            g = Factor(("B", "C"), rng.uniform(size=(3, 2)))
            h = Factor(("C",), rng.uniform(size=2))
            fg = f * g
            gf = g * f
            assert np.allclose(fg.values, gf.aligned_values(fg.scope), atol=1e-12)
            left = (f * g) * h
            right = f * (g * h)
            assert np.allclose(left.values, right.aligned_values(left.scope), atol=1e-12)

    def test_semantics_join(self):
        p = Factor(("A",), [0.5, 0.5], PROBABILITY)
        l = Factor(("A",), [1.0, 0.0], LIKELIHOOD)
        v = Factor(("A",), [-1.0, 2.0], VALUATION)
        assert (p * p).semantics == PROBABILITY
        assert (p * l).semantics == LIKELIHOOD
        assert (l * v).semantics == VALUATION
        assert (p * v).semantics == VALUATION


class TestSumOut:
    def test_cpt_rows_sum_to_one(self):
        cpt = Factor(("A", "B"), [[0.5, 0.5], [0.2, 0.8]])
        assert np.allclose(cpt.sum_out(["B"]).values, [1.0, 1.0])

    def test_empty_elimination(self):
        f = Factor(("A",), [1.0, 2.0])
        assert f.sum_out([]) is f

    def test_hand_example(self):
        f = Factor(("A", "B"), [[1.0, 2.0], [3.0, 4.0]])
        assert np.allclose(f.sum_out(["B"]).values, [3.0, 7.0])

    def test_unknown_variable(self):
        with pytest.raises(VarNotInScope):
            Factor(("A",), [1.0, 2.0]).sum_out(["B"])

    def test_distributes_over_disjoint_product(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            f = Factor(("A", "B"), rng.uniform(size=(2, 2)))
            g = Factor(("C",), rng.uniform(size=2))
            lhs = (f * g).sum_out(["A"])
            rhs = f.sum_out(["A"]) * g
            assert np.allclose(lhs.values, rhs.aligned_values(lhs.scope), atol=1e-12)


class TestMaxOut:
    def test_hand_example(self):
        f = Factor(("A", "B"), [[1.0, 2.0], [3.0, 4.0]])
        m, table = f.max_out(["B"])
        assert np.allclose(m.values, [2.0, 4.0])
        assert table.flat.tolist() == [1, 1]
        assert table.assignment((0,)) == {"B": 1}

    def test_tie_breaks_low(self):
        f = Factor(("A", "B"), [[5.0, 5.0], [5.0, 5.0]])
        m, table = f.max_out(["B"])
        assert table.flat.tolist() == [0, 0]

    def test_empty_elimination(self):
        f = Factor(("A",), [1.0, 2.0])
        m, table = f.max_out([])
        assert np.allclose(m.values, f.values)
        assert table.eliminated == ()

    def test_multivariable_lexicographic_ties(self):
        f = Factor(("A", "B", "C"), np.ones((2, 2, 2)))
        _, table = f.max_out(["B", "C"])
        assert table.assignment((0,)) == {"B": 0, "C": 0}


class TestReduce:
    def test_row_slice(self):
        cpt = Factor(("A", "B"), [[0.5, 0.5], [0.2, 0.8]])
        row = cpt.reduce({"A": 0})
        assert row.scope == ("B",)
        assert np.allclose(row.values, [0.5, 0.5])

    def test_identity(self):
        f = Factor(("A",), [1.0, 2.0])
        assert f.reduce({}) is f

    def test_hand_example(self):
        f = Factor(("A", "B"), [[0.15, 0.15], [0.14, 0.56]])
        assert np.allclose(f.reduce({"B": 1}).values, [0.15, 0.56])

    def test_bad_index(self):
        with pytest.raises(IndexOutOfRange):
            Factor(("A",), [1.0, 2.0]).reduce({"A": 5})

    def test_commutes_with_multiply(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            f = Factor(("A", "B"), rng.uniform(size=(2, 2)))
            g = Factor(("B", "C"), rng.uniform(size=(2, 2)))
            lhs = (f * g).reduce({"C": 1})
            rhs = f * g.reduce({"C": 1})
            assert np.allclose(lhs.values, rhs.aligned_values(lhs.scope), atol=1e-12)

    def test_commutes_with_disjoint_sum(self):
        rng = np.random.default_rng(3)
        f = Factor(("A", "B", "C"), rng.uniform(size=(2, 2, 2)))
        lhs = f.sum_out(["A"]).reduce({"C": 0})
        rhs = f.reduce({"C": 0}).sum_out(["A"])
        assert np.allclose(lhs.values, rhs.aligned_values(lhs.scope), atol=1e-12)


def test_indicator_and_product():
    ind = indicator("A", 3, 1)
    assert ind.values.tolist() == [0.0, 1.0, 0.0]
    scalar = product([])
    assert scalar.scope == () and scalar.total() == 1.0
    combined = product([Factor(("A",), [1.0, 2.0, 3.0]), ind])
    assert combined.values.tolist() == [0.0, 2.0, 0.0]


def test_valuation_allows_negative_entries():
    f = Factor(("A",), [-5.0, 3.0], VALUATION)
    assert f.values.min() < 0
