import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posetkit.adversary import (
    DeviationTable,
    MinAdversary,
    finalize_witness,
    fussenegger_gabow,
    log2_binom,
    lower_bound_ksel,
    lower_bound_ksel_branches,
    lower_bound_min,
    random_ksel_bound,
)
from posetkit.core import Verdict, kselect_bruteforce, width
from posetkit.errors import DomainError, SelfQuery
from posetkit.selection import minimals_det, minimals_rand


def test_first_query_w2_colors_both_differently():
    adv = MinAdversary(4, 2)
    assert adv.query(0, 1) is Verdict.INCOMPARABLE
    assert adv.color[0] >= 0 and adv.color[1] >= 0 and adv.color[0] != adv.color[1]


def test_same_colour_higher_index_dominates():
    adv = MinAdversary(3, 1)
    assert adv.query(2, 0) is Verdict.DOMINATES
    assert adv.query(1, 2) is Verdict.DOMINATED_BY
    with pytest.raises(SelfQuery):
        adv.query(1, 1)


def test_minimals_det_n4_w2_needs_four_queries():
    adv = MinAdversary(4, 2)
    got = minimals_det(4, adv, 2)
    witness = finalize_witness(adv)
    assert adv.count >= 4 == lower_bound_min(4, 2)
    assert got == kselect_bruteforce(witness, 1)


def test_witness_without_queries():
    adv = MinAdversary(5, 3)
    witness = finalize_witness(adv)
    assert width(witness) == 3


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 40), st.integers(1, 6), st.sampled_from(["min", "ksel"]), st.integers(0, 1000))
def test_random_interaction_stays_consistent(n, w, mode, seed):
    w = min(w, n)
    adv = MinAdversary(n, w, mode=mode, seed=seed)
    rng = np.random.default_rng(seed)
    for _ in range(3 * n):
        x, y = rng.choice(n, size=2, replace=False)
        adv.query(int(x), int(y))
        # colour legality at every step
        for e in range(n):
            if adv.color[e] >= 0:
                assert all(adv.color[f] != adv.color[e] for f in adv.neighbors[e] if adv.color[f] >= 0)
    witness = finalize_witness(adv)
    assert width(witness) <= w
    if n >= w and mode == "min":
        assert width(witness) == w


@pytest.mark.parametrize("n,w", [(12, 2), (30, 3), (40, 5), (25, 1)])
@pytest.mark.parametrize("algo", ["det", "rand"])
def test_universal_min_bound(n, w, algo):
    adv = MinAdversary(n, w)
    got = minimals_det(n, adv, w) if algo == "det" else minimals_rand(n, adv, w, seed=n)
    witness = finalize_witness(adv)
    assert got == kselect_bruteforce(witness, 1)
    assert adv.count >= math.ceil(lower_bound_min(n, w))


def test_deviation_update_example():
    d = DeviationTable(2)
    c = d.pick([0, 1])
    d.update(c, [0, 1])
    assert c == 0 and d.values() == [Fraction(1, 2), Fraction(-1, 2)]


@settings(max_examples=30)
@given(st.integers(1, 8), st.lists(st.integers(1, 255), max_size=200))
def test_deviation_invariants(w, masks):
    d = DeviationTable(w)
    for m in masks:
        elig = [c for c in range(w) if (m >> c) & 1] or [0]
        d.update(d.pick(elig), elig)
        vals = d.values()
        assert sum(vals) == 0
        for m_, s in enumerate(np.cumsum(sorted(vals)), start=1):
            assert s >= Fraction(m_ * (m_ - w), 2)


def test_lower_bound_min_values():
    assert lower_bound_min(4, 2) == 4
    assert lower_bound_min(6, 3) == 9
    assert lower_bound_min(17, 1) == 16


def _ksel_reference(n, w, k):
    # straight transcription with math.comb where the arguments are integral
    r = n / (2 * w - 1)

    def lb(a, b):
        if float(a).is_integer():
            return math.log2(math.comb(int(a), b))
        return log2_binom(a, b)

    base = (w + 1) * n / 2 - w * (k + math.log2(k)) - w**3 / 8
    one = (w - 1) * lb(r, k - 1) + lb(r * w, k - 1)
    two = n * (r - k) * (w - 1) / (2 * r) + lb(n - (w - 1) * k, k - 1)
    return base + min(one, two)


def test_lower_bound_ksel_values():
    assert lower_bound_ksel(210, 3, 2) == pytest.approx(_ksel_reference(210, 3, 2))
    common, a, b = lower_bound_ksel_branches(210, 3, 2)
    assert lower_bound_ksel(210, 3, 2) == pytest.approx(common + min(a, b))
    # k = 1: binomial terms vanish
    assert lower_bound_ksel(100, 3, 1) <= float(lower_bound_min(100, 3)) + 27 / 8
    with pytest.raises(DomainError):
        lower_bound_ksel(10, 3, 3)


def test_random_ksel_bound_values():
    assert random_ksel_bound(400, 4, 1) == pytest.approx((4 + 3) * 400 / 4 - 4)
    assert random_ksel_bound(50, 1, 1) == pytest.approx(49)
    tail = 4 * (1 - math.exp(-400 / 32)) * math.log2(math.comb(50, 1))
    assert random_ksel_bound(400, 4, 2) == pytest.approx(700 - 8 + tail)


def test_fussenegger_gabow():
    assert fussenegger_gabow(10, 1) == 9
    assert fussenegger_gabow(10, 3) == pytest.approx(7 + math.log2(45))
