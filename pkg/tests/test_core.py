import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posetkit.core import (
    ChainDecomposition,
    ConstraintSet,
    GroundTruthPoset,
    dump_poset,
    generate_chain_union,
    generate_transitive_relation,
    generate_width_bounded,
    heights_bruteforce,
    is_linear_extension,
    kselect_bruteforce,
    load_poset,
    load_relation,
    max_antichain_bruteforce,
    min_chain_decomposition,
    nposets_bounds,
    width,
)
from posetkit.counting import count_posets
from posetkit.errors import CycleError, ParseError

from conftest import antichain_poset, chain_poset, diamond_poset, disjoint_chains, posets


def test_load_closes_chain():
    p = load_poset("n 3\n2 1\n1 0\n")
    assert p.dominates[2, 0]


def test_load_rejects_cycle():
    with pytest.raises(CycleError):
        load_poset("n 3\n2 1\n1 0\n0 1\n")


def test_load_rejects_self_loop():
    with pytest.raises(CycleError):
        load_poset("n 2\n1 1\n")


@pytest.mark.parametrize("text", ["", "n x\n", "n 2\n0\n", "n 2\n0 5\n", "3 2\n", "n 2\na b\n"])
def test_load_parse_errors(text):
    with pytest.raises(ParseError):
        load_poset(text)


def test_load_comments_and_blank_lines():
    p = load_poset("# hi\nn 2   # count\n\n1 0 # edge\n")
    assert p.dominates[1, 0] and not p.dominates[0, 1]


def test_diamond_closure_and_width(diamond):
    assert diamond.dominates[3, 0]
    assert width(diamond) == 2


def test_relation_matrix_is_read_only(diamond):
    with pytest.raises(ValueError):
        diamond.dominates[0, 1] = True


def test_load_relation_allows_cycles():
    rel = load_relation("n 3\n0 1\n1 0\n1 2\n")
    assert rel[0, 1] and rel[1, 0] and rel[0, 2]
    assert not rel.diagonal().any()


@given(posets(max_n=9))
def test_dump_load_round_trip(p):
    assert load_poset(dump_poset(p, comment="round trip")) == p


def test_widths_of_small_shapes():
    assert width(chain_poset(5)) == 1
    assert width(antichain_poset(3)) == 3


def test_min_chain_decomposition_diamond(diamond):
    d = min_chain_decomposition(diamond)
    assert len(d) == 2 and d.is_valid(diamond)


def test_min_chain_decomposition_trivial_shapes():
    assert len(min_chain_decomposition(chain_poset(6))) == 1
    assert sorted(min_chain_decomposition(antichain_poset(3)).chains) == [(0,), (1,), (2,)]


@settings(max_examples=150)
@given(posets(max_n=9))
def test_width_matches_bruteforce_antichain(p):
    d = min_chain_decomposition(p)
    assert d.is_valid(p)
    assert width(p) == len(d) == max_antichain_bruteforce(p)


@given(posets(max_n=9))
def test_generated_posets_are_valid(p):
    assert p.is_valid()


def test_heights_examples(diamond):
    assert heights_bruteforce(diamond) == {0: 0, 1: 1, 2: 1, 3: 2}
    assert heights_bruteforce(antichain_poset(4)) == {i: 0 for i in range(4)}
    assert heights_bruteforce(chain_poset(3)) == {0: 0, 1: 1, 2: 2}


def _longest_chain_below(p, x):
    # independent reference: try every subset of the elements below x
    below = [y for y in range(p.n) if p.dominates[x, y]]
    best = 0
    for r in range(len(below), 0, -1):
        for sub in itertools.combinations(below, r):
            if all(p.dominates[a, b] or p.dominates[b, a] for a, b in itertools.combinations(sub, 2)):
                return r
    return best


@settings(max_examples=60)
@given(posets(max_n=7))
def test_heights_properties(p):
    h = heights_bruteforce(p)
    for x in range(p.n):
        assert h[x] == _longest_chain_below(p, x)
        assert (h[x] == 0) == (not p.dominates[x].any())
        for y in range(p.n):
            if p.dominates[x, y]:
                assert h[x] > h[y]


def test_kselect_examples(diamond):
    assert kselect_bruteforce(diamond, 1) == {0}
    assert kselect_bruteforce(diamond, 2) == {0, 1, 2}
    assert kselect_bruteforce(disjoint_chains(3, 3), 2) == {0, 1, 3, 4}


def test_chain_union_single_chain_is_total_order():
    p = generate_chain_union(6, 1, seed=3)
    assert width(p) == 1


@given(st.integers(1, 30), st.integers(1, 6), st.integers(0, 10**6))
def test_generators_respect_width(n, w, seed):
    w = min(w, n)
    assert width(generate_chain_union(n, w, seed=seed)) <= w
    p = generate_width_bounded(n, w, seed=seed)
    assert p.is_valid() and width(p) <= w


def test_width_bounded_many_seeds():
    assert all(width(generate_width_bounded(10, 3, seed=s)) <= 3 for s in range(100))


def test_chain_union_chain_sizes_concentrate():
    # each of 4 chains should hold between 125 and 375 of 1000 elements
    # except with probability below 8 exp(-1000/48)
    for seed in range(40):
        p = generate_chain_union(1000, 4, seed=seed)
        sizes = [len(c) for c in min_chain_decomposition(p).chains]
        assert len(sizes) == 4
        assert all(125 <= s <= 375 for s in sizes)


def test_generators_are_deterministic():
    assert generate_width_bounded(40, 3, seed=5) == generate_width_bounded(40, 3, seed=5)


def test_transitive_relation_is_transitive():
    rel = generate_transitive_relation(20, 3, mutual=5, seed=2)
    closed = rel | (rel.astype(int) @ rel.astype(int) > 0)
    np.fill_diagonal(closed, False)
    assert np.array_equal(closed, rel)


def test_constraint_set_disjoint():
    with pytest.raises(ValueError):
        ConstraintSet({(0, 1)}, {(0, 1)})


def test_chain_decomposition_validity(diamond):
    assert ChainDecomposition([[0, 1, 3], [2]]).is_valid(diamond)
    assert not ChainDecomposition([[0, 1, 2], [3]]).is_valid(diamond)
    assert not ChainDecomposition([[0, 1, 3]]).is_valid(diamond)


def test_is_linear_extension(diamond):
    assert is_linear_extension(diamond, [0, 2, 1, 3])
    assert not is_linear_extension(diamond, [0, 3, 1, 2])


def test_nposets_bounds_w1_is_log_factorial():
    for n in (1, 5, 20):
        lo, hi = nposets_bounds(n, 1)
        expected = float(np.log2(float(np.prod(np.arange(1, n + 1, dtype=float)))))
        assert lo == pytest.approx(expected) and hi == pytest.approx(expected)
    assert nposets_bounds(1, 1) == (0.0, 0.0)


@pytest.mark.parametrize("n", range(1, 8))
def test_nposets_bounds_bracket_exhaustive_counts(n):
    for w in range(1, n + 1):
        lo, hi = nposets_bounds(n, w)
        exact = np.log2(count_posets(n, w))
        assert lo - 1e-9 <= exact <= hi + 1e-9


def test_nposets_bounds_bracket_n8_w2():
    lo, hi = nposets_bounds(8, 2)
    assert lo - 1e-9 <= np.log2(count_posets(8, 2)) <= hi + 1e-9
