import numpy as np
import pytest
from hypothesis import given, settings

from posetkit.chainmerge import build
from posetkit.core import GroundTruthPoset, Verdict, generate_chain_union, generate_width_bounded, min_chain_decomposition
from posetkit.errors import InvalidDecomposition, SelfQuery
from posetkit.oracle import PosetOracle, QueryCounter

from conftest import antichain_poset, chain_poset, posets


def test_single_chain_needs_no_queries():
    p = chain_poset(5)
    o = QueryCounter(PosetOracle(p))
    idx = build(o, [[0, 1, 2, 3, 4]])
    assert o.count == 0
    assert idx.lookup(4, 0) is Verdict.DOMINATES


def test_diamond_reach(diamond):
    idx = build(PosetOracle(diamond), [[0, 1, 3], [2]])
    assert idx.reach[3, 1] == 0  # element 2 sits at position 0 of chain 1
    assert idx.reach[1, 1] == -1
    assert idx.lookup(3, 0) is Verdict.DOMINATES
    assert idx.lookup(1, 2) is Verdict.INCOMPARABLE
    assert np.array_equal(idx.relation_table(), diamond.dominates)
    with pytest.raises(SelfQuery):
        idx.lookup(1, 1)


def test_antichain_table():
    idx = build(PosetOracle(antichain_poset(4)), [[i] for i in range(4)])
    assert not idx.relation_table().any()


def test_build_bound_d200_5():
    p = generate_chain_union(200, 5, seed=11)
    o = QueryCounter(PosetOracle(p))
    idx = build(o, min_chain_decomposition(p))
    assert idx.q == 5 and o.count <= 2 * 5 * 200


@settings(max_examples=60, deadline=None)
@given(posets(max_n=12))
def test_lookup_exact_and_free(p):
    d = min_chain_decomposition(p)
    o = QueryCounter(PosetOracle(p))
    idx = build(o, d)
    assert o.count <= 2 * len(d) * p.n
    spent = o.count
    table = idx.relation_table()[: p.n, : p.n]
    assert np.array_equal(table, p.dominates)
    assert o.count == spent


def test_lookup_n64_and_monotone_reach():
    p = generate_width_bounded(64, 5, seed=3)
    idx = build(PosetOracle(p), min_chain_decomposition(p))
    assert np.array_equal(idx.relation_table(), p.dominates)
    for c in idx.chains:
        rows = idx.reach[list(c)]
        assert (np.diff(rows, axis=0) >= 0).all()


def test_table_is_a_partial_order():
    p = generate_width_bounded(40, 4, seed=9)
    t = build(PosetOracle(p), min_chain_decomposition(p)).relation_table()
    assert GroundTruthPoset(t).is_valid()


def test_duplicate_element_rejected():
    with pytest.raises(InvalidDecomposition):
        build(lambda x, y: Verdict.INCOMPARABLE, [[0, 1], [1]])


def test_dump_lists_every_element(diamond):
    text = build(PosetOracle(diamond), [[0, 1, 3], [2]]).dump()
    assert text.startswith("chains 2")
    assert len([ln for ln in text.splitlines() if "|" in ln and not ln.startswith("reach")]) == 4
