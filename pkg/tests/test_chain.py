import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from crispc.chain import Chain, format_fraction, pareto_minimal
from crispc.errors import ChainError, DomainError


def test_values_and_degrees_round_trip():
    c = Chain(5)
    assert [c.value(d) for d in c.degrees] == [Fraction(k, 4) for k in range(5)]
    assert c.degree("0.75") == 3 and c.degree(Fraction(1, 4)) == 1 and c.degree(1) == 4
    with pytest.raises(DomainError, match="not on chain"):
        c.degree("0.3")
    with pytest.raises(DomainError):
        c.degree(2)


@pytest.mark.parametrize("args", [(1,), (0,), (3, "product"), (3, "lukasiewicz", [[0]])])
def test_bad_construction(args):
    with pytest.raises(ChainError):
        Chain(*args)


def test_succ_pred_bounds():
    c = Chain(3)
    assert c.succ(0) == 1 and c.pred(2) == 1
    with pytest.raises(DomainError):
        c.succ(2)
    with pytest.raises(DomainError):
        c.pred(0)


def test_custom_table_matches_builtin():
    table = [[min(x, y) for y in range(4)] for x in range(4)]
    custom, goedel = Chain(4, "custom", table), Chain(4, "goedel")
    for x, y in itertools.product(range(4), repeat=2):
        assert custom.residuum(x, y) == goedel.residuum(x, y)
        assert custom.tconorm(x, y) == goedel.tconorm(x, y)


def test_custom_table_reports_witness():
    table = [[min(x, y) for y in range(3)] for x in range(3)]
    table[0][1] = 1  # breaks commutativity (and monotonicity)
    with pytest.raises(ChainError, match="witness"):
        Chain(3, "custom", table)
    table = [[0, 0, 0], [0, 0, 1], [0, 1, 1]]  # identity fails at x=2
    with pytest.raises(ChainError, match="identity"):
        Chain(3, "custom", table)


def test_restricted_frontier_for_crisp_operand():
    c = Chain(6)
    assert c.tnorm_frontier(2) == ((2, 5), (3, 4), (4, 3), (5, 2))
    assert c.tnorm_frontier(2, xs=(0, 5)) == ((5, 2),)


def test_impl_frontier_luk():
    c = Chain(3)
    # x => y < 1 iff x > y; minimal x, maximal y
    assert c.impl_frontier(2) == ((1, 0), (2, 1))
    assert c.impl_frontier(1) == ((2, 0),)


def test_frontier_needs_positive_degree():
    with pytest.raises(DomainError):
        Chain(3).tnorm_frontier(0)


def test_neg_helpers():
    luk, g = Chain(5), Chain(5, "goedel")
    assert luk.neg_inv_max(3) == 1  # 1 - x >= 3/4
    assert g.neg_inv_max(3) == 0
    assert luk.neg_leq_threshold(1) == 3
    with pytest.raises(DomainError):
        luk.neg_leq_threshold(4)


def test_zadeh_not_residuated():
    z = Chain(3, "zadeh")
    assert not z.residuated
    assert z.residuum(1, 1) == 1  # max(1 - 1/2, 1/2)


@pytest.mark.parametrize("v,text", [(Fraction(1, 4), "0.25"), (Fraction(1, 3), "1/3"), (Fraction(1), "1"),
                                    (Fraction(0), "0"), (Fraction(4, 5), "0.8")])
def test_format_fraction(v, text):
    assert format_fraction(v) == text


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5)), max_size=30))
def test_pareto_minimal_is_the_minimal_antichain(points):
    kept = pareto_minimal(points)
    le = lambda p, q: all(a <= b for a, b in zip(p, q))  # noqa: E731
    assert set(kept) <= set(points)
    for p in points:
        assert any(le(k, p) for k in kept)
    for p, q in itertools.permutations(kept, 2):
        assert not le(p, q)


def test_chain_identity():
    assert Chain(4) == Chain(4, "lukasiewicz") != Chain(4, "goedel")
    assert len({Chain(4), Chain(4)}) == 1
