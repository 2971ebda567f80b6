import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posetkit.core import GroundTruthPoset, Verdict, generate_transitive_relation, generate_width_bounded
from posetkit.errors import SelfQuery
from posetkit.oracle import (
    InferenceCache,
    PosetOracle,
    QueryCounter,
    TransitiveOracle,
    TransitiveOracleAdapter,
    recover_extra_relations,
)
from posetkit.sorting import poset_mergesort

from conftest import posets


def test_diamond_answers(diamond):
    o = PosetOracle(diamond)
    assert o.query(3, 0) is Verdict.DOMINATES
    assert o.query(0, 3) is Verdict.DOMINATED_BY
    assert o.query(1, 2) is Verdict.INCOMPARABLE
    with pytest.raises(SelfQuery):
        o.query(2, 2)


@given(posets(max_n=7), st.data())
def test_counter_is_transparent(p, data):
    if p.n < 2:
        return
    c = QueryCounter(PosetOracle(p))
    pairs = data.draw(st.lists(st.tuples(st.integers(0, p.n - 1), st.integers(0, p.n - 1)).filter(lambda t: t[0] != t[1]), max_size=20))
    for x, y in pairs:
        assert c.query(x, y) is p.relation(x, y)
    assert c.count == len(pairs)


@settings(max_examples=60)
@given(posets(min_n=2, max_n=8), st.data())
def test_inference_cache_sound_and_closed(p, data):
    inner = QueryCounter(PosetOracle(p))
    cache = InferenceCache(inner, p.n)
    pairs = data.draw(st.lists(st.tuples(st.integers(0, p.n - 1), st.integers(0, p.n - 1)).filter(lambda t: t[0] != t[1]), max_size=40))
    for x, y in pairs:
        before = inner.count
        v = cache.query(x, y)
        assert v is p.relation(x, y)
        if inner.count == before:
            # suppressed: the answer must match the truth when asked directly
            assert PosetOracle(p).query(x, y) is v
    known = cache.dominance_matrix()
    assert not (known & ~p.dominates).any()
    two = (known.astype(int) @ known.astype(int)) > 0
    assert not (two & ~known).any()
    assert cache.forwarded == inner.count


def test_inference_cache_skips_implied_query():
    p = GroundTruthPoset.from_edges(3, [(2, 1), (1, 0)])
    inner = QueryCounter(PosetOracle(p))
    cache = InferenceCache(inner, 3)
    cache.query(2, 1)
    cache.query(1, 0)
    assert cache.query(0, 2) is Verdict.DOMINATED_BY
    assert inner.count == 2 and cache.inferred == 1


def _rel(n, pairs):
    r = np.zeros((n, n), dtype=bool)
    for a, b in pairs:
        r[a, b] = True
    return r


def test_adapter_single_direction_and_none():
    a = TransitiveOracleAdapter(TransitiveOracle(_rel(3, [(0, 1)])))
    assert a.query(0, 1) is Verdict.DOMINATES
    assert a.query(1, 2) is Verdict.INCOMPARABLE


def test_adapter_tie_rule_higher_id_dominates():
    a = TransitiveOracleAdapter(TransitiveOracle(_rel(2, [(0, 1), (1, 0)])))
    assert a.query(1, 0) is Verdict.DOMINATES
    b = TransitiveOracleAdapter(TransitiveOracle(_rel(2, [(0, 1), (1, 0)])))
    assert b.query(0, 1) is Verdict.DOMINATED_BY
    assert b.mutual_pairs == {(0, 1)}


def _creates_cycle(order, x, y):
    d = order.copy()
    d[x, y] = True
    n = len(d)
    for k in range(n):
        d |= d[:, [k]] & d[[k], :]
    return bool(d.diagonal().any())


@pytest.mark.parametrize("seed", range(25))
def test_adapter_order_is_minimally_induced(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    rel = generate_transitive_relation(n, int(rng.integers(1, n + 1)), mutual=int(rng.integers(0, 4)), seed=seed)
    adapter = TransitiveOracleAdapter(TransitiveOracle(rel))
    poset_mergesort(n, adapter, n)
    order = poset_mergesort(n, adapter, n).relation_table()[:n, :n]
    assert not (order & ~rel).any()
    for x, y in itertools.permutations(range(n), 2):
        if rel[x, y] and not order[x, y]:
            assert _creates_cycle(order, x, y)


def test_recover_on_antisymmetric_relation():
    p = generate_width_bounded(20, 3, seed=4)
    adapter = TransitiveOracleAdapter(TransitiveOracle(p.dominates))
    index = poset_mergesort(20, adapter, 3)
    assert np.array_equal(recover_extra_relations(adapter, index), p.dominates)


def test_recover_restores_mutual_pair():
    rel = _rel(2, [(0, 1), (1, 0)])
    adapter = TransitiveOracleAdapter(TransitiveOracle(rel))
    index = poset_mergesort(2, adapter, 1)
    out = recover_extra_relations(adapter, index)
    assert out[0, 1] and out[1, 0]


@pytest.mark.parametrize("seed", range(10))
def test_recover_poset_plus_three_mutual_pairs(seed):
    rel = generate_transitive_relation(6, 3, mutual=3, seed=seed)
    adapter = TransitiveOracleAdapter(TransitiveOracle(rel))
    index = poset_mergesort(6, adapter, 6)
    before = adapter.inner.count
    out = recover_extra_relations(adapter, index)
    assert np.array_equal(out, rel)
    assert adapter.inner.count - before <= 2 * 6 * index.q
