"""Sorting a width-bounded poset through a comparison oracle.

Every sorter returns a :class:`ChainMergeIndex`, from which the full relation
table can be read without further queries.
"""

from __future__ import annotations

import bisect
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import bounds
from .chainmerge import ChainMergeIndex, build
from .core import ChainDecomposition, Verdict, _chains_from_matrix
from .counting import CandidateSet, count_posets, exhaustive_cap
from .errors import (
    CapExceeded,
    InconsistentProbe,
    InvalidDecomposition,
    NoComparableTopPair,
    WidthExceeded,
)
from .oracle import TransitiveOracleAdapter, recover_extra_relations

FOUND, GO_LOWER, GO_HIGHER = 0, -1, 1


def _known_comparator(dom: np.ndarray) -> Callable[[int, int], Verdict]:
    def compare(x: int, y: int) -> Verdict:
        if dom[x, y]:
            return Verdict.DOMINATES
        if dom[y, x]:
            return Verdict.DOMINATED_BY
        return Verdict.INCOMPARABLE

    return compare


def _decompose_known(dom: np.ndarray, inserted: list[int], w: int) -> list[list[int]]:
    """Minimum chain cover of the already-sorted elements (no oracle cost)."""
    sub = dom[np.ix_(inserted, inserted)]
    chains = [[inserted[i] for i in c] for c in _chains_from_matrix(sub)]
    if len(chains) > w:
        raise WidthExceeded(f"known relations need {len(chains)} chains, bound is {w}")
    return chains


def _extend_cover(chains: list[list[int]], dom: np.ndarray, e: int, inserted: list[int], w: int) -> list[list[int]]:
    """Minimum chain cover after adding ``e`` to a minimum cover of the rest.

    Width cannot drop when an element is added, so slotting ``e`` into an
    existing chain keeps the cover minimum; otherwise fall back to matching.
    """
    for c in chains:
        below = dom[e, c]
        k = int(below.sum())
        if below[:k].all() and dom[c[k:], e].all():
            c.insert(k, e)
            return chains
    return _decompose_known(dom, inserted + [e], w)


def _index_from_known(dom: np.ndarray, n: int) -> ChainMergeIndex:
    return build(_known_comparator(dom), _chains_from_matrix(dom[:n, :n]))


# ---------------------------------------------------------------------------
# binary insertion
# ---------------------------------------------------------------------------


def bin_insertion_sort(n: int, oracle, w: int, *, order: Sequence[int] | None = None) -> ChainMergeIndex:
    """Insert elements one by one, binary searching every chain of the known order.

    Per chain of length l, the smallest dominator of the new element costs
    ceil(log2(l+1)) queries; the largest dominated element can only sit below
    it, so the second search is restricted to that prefix.
    """
    order = list(range(n)) if order is None else list(order)
    dom = np.zeros((n, n), dtype=bool)
    inserted: list[int] = []
    cover: list[list[int]] = []
    for e in order:
        if inserted:
            for chain in cover:
                lo, hi = 0, len(chain)
                while lo < hi:
                    mid = (lo + hi) // 2
                    if oracle.query(chain[mid], e) is Verdict.DOMINATES:
                        hi = mid
                    else:
                        lo = mid + 1
                above_from = lo
                lo, hi = 0, above_from
                while lo < hi:
                    mid = (lo + hi) // 2
                    if oracle.query(e, chain[mid]) is Verdict.DOMINATES:
                        lo = mid + 1
                    else:
                        hi = mid
                dom[chain[above_from:], e] = True
                dom[e, chain[:lo]] = True
            # close transitively through e
            ups = np.flatnonzero(dom[:, e])
            downs = np.flatnonzero(dom[e])
            dom[np.ix_(ups, downs)] = True
            cover = _extend_cover(cover, dom, e, inserted, w)
        else:
            cover = [[e]]
        inserted.append(e)
    return _index_from_known(dom, n)


# ---------------------------------------------------------------------------
# entropy-weighted binary search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightedIntervalPartition:
    """[0, 1) cut into consecutive intervals, item j owning [t_j, t_{j+1}).

    Items are 0-based here.  Boundaries are exact rationals.
    """

    boundaries: tuple[Fraction, ...]
    total: int = 0
    weights: tuple[int, ...] = ()

    @classmethod
    def from_weights(cls, weights: Sequence[int]) -> "WeightedIntervalPartition":
        weights = tuple(int(x) for x in weights)
        if any(x < 0 for x in weights):
            raise ValueError("weights must be nonnegative")
        total = sum(weights)
        if total == 0:
            raise ValueError("at least one weight must be positive")
        acc, bounds_ = 0, [Fraction(0)]
        for x in weights:
            acc += x
            bounds_.append(Fraction(acc, total))
        return cls(tuple(bounds_), total, weights)

    def __len__(self) -> int:
        return len(self.boundaries) - 1

    def length(self, j: int) -> Fraction:
        return self.boundaries[j + 1] - self.boundaries[j]

    def locate(self, x: Fraction) -> int:
        if not 0 <= x < 1:
            raise ValueError(f"{x} is outside [0, 1)")
        return bisect.bisect_right(self.boundaries, x) - 1


def weighted_binary_search(
    part: WeightedIntervalPartition,
    probe: Callable[[int], int],
    *,
    max_rounds: int | None = None,
) -> tuple[int, int]:
    """Find the item whose probe answers FOUND.

    ``probe(j)`` returns FOUND, GO_LOWER (the target is a smaller item) or
    GO_HIGHER.  The probe point starts at 1/2 and moves by a step that starts
    at 1/4 and halves every round.  Returns ``(item, rounds)``.
    """
    if max_rounds is None:
        max_rounds = 4 + max(part.total, 1).bit_length()
    x, step = Fraction(1, 2), Fraction(1, 4)
    lo, hi = 0, len(part) - 1
    for rounds in range(1, max_rounds + 1):
        j = part.locate(x)
        answer = probe(j)
        if answer == FOUND:
            return j, rounds
        if answer == GO_LOWER:
            hi = min(hi, j - 1)
            x -= step
        elif answer == GO_HIGHER:
            lo = max(lo, j + 1)
            x += step
        else:
            raise ValueError(f"bad probe answer {answer!r}")
        if lo > hi or not any(part.weights[lo : hi + 1]):
            raise InconsistentProbe(f"no item left between {lo} and {hi}")
        step /= 2
    raise InconsistentProbe(f"no item found after {max_rounds} rounds")


# ---------------------------------------------------------------------------
# EntropySort
# ---------------------------------------------------------------------------


@dataclass
class EntropyTrace:
    """Per-run bookkeeping of EntropySort, filled when passed in."""

    queries: int = 0
    family_size: int = 0
    searches: list[tuple[int, int, int]] = field(default_factory=list)  # (queries, total, part)
    insertions: list[tuple[int, int, int]] = field(default_factory=list)  # (queries, before, after)


def entropy_sort(
    n: int,
    oracle,
    w: int,
    *,
    cap: int | None = None,
    trace: EntropyTrace | None = None,
    check: bool = True,
) -> ChainMergeIndex:
    """Insert elements while splitting each search by counts of consistent posets.

    The set of width-<=w posets on all n elements that agree with every answer
    so far is kept explicitly.  Per chain, class j of the smallest-dominator
    search holds the candidates in which the j-th chain element is the
    smallest one above the inserted element; the search interval of class j
    is proportional to its size.  The largest-dominated search is symmetric.
    """
    cap = exhaustive_cap() if cap is None else cap
    if n > cap:
        raise CapExceeded(f"EntropySort needs n <= {cap}, got {n}")
    trace = trace if trace is not None else EntropyTrace()
    w = min(w, max(n, 1))
    cands = CandidateSet(n, w)
    trace.family_size = len(cands)
    dom = np.zeros((n, n), dtype=bool)
    inserted: list[int] = []
    asked = 0

    for e in range(n):
        if not inserted:
            inserted.append(e)
            continue
        before = len(cands)
        start = asked
        memo: dict[tuple[int, int], Verdict] = {}

        def ask(x: int, y: int) -> Verdict:
            nonlocal asked
            if (x, y) not in memo:
                asked += 1
                v = oracle.query(x, y)
                memo[(x, y)], memo[(y, x)] = v, v.flip()
            return memo[(x, y)]

        for chain in _decompose_known(dom, inserted, w):
            length = len(chain)
            # item j: chain[j:] dominate e, chain[:j] do not  (j = length: none)
            above = sum(cands.bits(c, e) for c in chain)
            cls = length - above

            def probe_above(j: int) -> int:
                if j < length and ask(chain[j], e) is not Verdict.DOMINATES:
                    return GO_HIGHER
                if j > 0 and ask(chain[j - 1], e) is Verdict.DOMINATES:
                    return GO_LOWER
                return FOUND

            first_above = _entropy_search(cands, cls, length, probe_above, ask, trace, lambda: asked)

            # item j: e dominates exactly chain[:j]
            cls = sum(cands.bits(e, c) for c in chain)

            def probe_below(j: int) -> int:
                if j > 0 and ask(e, chain[j - 1]) is not Verdict.DOMINATES:
                    return GO_LOWER
                if j < length and ask(e, chain[j]) is Verdict.DOMINATES:
                    return GO_HIGHER
                return FOUND

            below_upto = _entropy_search(cands, cls, length, probe_below, ask, trace, lambda: asked)
            dom[chain[first_above:], e] = True
            dom[e, chain[:below_upto]] = True

        ups = np.flatnonzero(dom[:, e])
        downs = np.flatnonzero(dom[e])
        dom[np.ix_(ups, downs)] = True
        inserted.append(e)
        spent = asked - start
        trace.insertions.append((spent, before, len(cands)))
        if check:
            # queries <= 4q + 2 log2(before / after)
            q = len(_chains_from_matrix(dom[np.ix_(inserted[:-1], inserted[:-1])]))
            assert _within_insert_bound(spent, q, before, len(cands)), (spent, q, before, len(cands))

    trace.queries = asked
    if check:
        assert bounds.entropy_ok(asked, trace.family_size, n, w), (asked, trace.family_size)
    return _index_from_known(dom, n)


def _within_insert_bound(spent: int, q: int, before: int, after: int) -> bool:
    slack = spent - 4 * q
    return slack <= 0 or (after * after) << slack <= before * before


def _entropy_search(cands, cls, length, probe, ask, trace, asked_now) -> int:
    counts = np.bincount(cls, minlength=length + 1)
    if counts.sum() == 0:
        raise WidthExceeded("no width-bounded poset is consistent with the answers")
    part = WeightedIntervalPartition.from_weights(counts.tolist())
    start = asked_now()
    try:
        j, _ = weighted_binary_search(part, probe)
    except InconsistentProbe as exc:
        raise WidthExceeded(f"no width-bounded poset fits the answers ({exc})") from exc
    if counts[j] == 0:
        raise WidthExceeded("the oracle's answers fall outside the counted family")
    spent = asked_now() - start
    trace.searches.append((spent, int(counts.sum()), int(counts[j])))
    assert bounds.weighted_search_ok(spent, int(counts.sum()), int(counts[j])), (spent, counts, j)
    cands.keep(cls == j)
    return j


# ---------------------------------------------------------------------------
# peeling
# ---------------------------------------------------------------------------


def _links_to_chains(parent: dict[int, int], elements: Sequence[int]) -> list[list[int]]:
    has_child = set(parent.values())
    chains = []
    for x in sorted(elements):
        if x in has_child:
            continue
        chain = [x]
        while chain[-1] in parent:
            chain.append(parent[chain[-1]])
        chains.append(chain)
    return chains


def peeling_iteration(chains: Sequence[Sequence[int]], dominates: Callable[[int, int], bool]) -> list[list[int]]:
    """Reduce the number of chains by one using relation lookups only.

    Top elements are repeatedly compared in pairs; when y > x for two tops,
    x dislodges y, which is removed from its working chain.  When some
    working chain runs empty, the chain of dislodgements leading to it is
    traced back and the links are rewired so one chain disappears.
    """
    chains = [list(c) for c in chains]
    parent: dict[int, int] = {}
    for c in chains:
        for lo, hi in zip(c, c[1:]):
            parent[lo] = hi
    chain_of = {x: i for i, c in enumerate(chains) for x in c}
    ptr = [len(c) - 1 for c in chains]
    tops = [c[-1] for c in chains]
    live = set(tops)
    pending = deque((tops[a], tops[b]) for a in range(len(tops)) for b in range(a + 1, len(tops)))
    dislodged_by: dict[int, int] = {}
    emptied = None
    while emptied is None:
        if not pending:
            raise NoComparableTopPair("no comparable pair among the top elements")
        x, y = pending.popleft()
        if x not in live or y not in live:
            continue
        if dominates(y, x):
            low, high = x, y
        elif dominates(x, y):
            low, high = y, x
        else:
            continue
        dislodged_by[high] = low
        live.discard(high)
        j = chain_of[high]
        ptr[j] -= 1
        if ptr[j] < 0:
            emptied = high
            break
        new_top = chains[j][ptr[j]]
        pending.extend((new_top, t) for t in live)
        live.add(new_top)

    # trace back (x_1, y_1), ..., (x_t, y_t): y_i sits right above x_{i+1}
    seq = [(dislodged_by[emptied], emptied)]
    while seq[0][0] in parent:
        y_prev = parent[seq[0][0]]
        seq.insert(0, (dislodged_by[y_prev], y_prev))
    for x, y in seq:
        parent[x] = y
    return _links_to_chains(parent, [x for c in chains for x in c])


def _check_peel_step(before, after, dominates) -> None:
    if len(after) != len(before) - 1:
        raise InvalidDecomposition(f"peeling went from {len(before)} to {len(after)} chains")
    if sorted(x for c in after for x in c) != sorted(x for c in before for x in c):
        raise InvalidDecomposition("peeling lost or duplicated elements")
    for c in after:
        for lo, hi in zip(c, c[1:]):
            if not dominates(hi, lo):
                raise InvalidDecomposition(f"link {hi} > {lo} is not a true relation")


def peel(
    compare,
    chains: ChainDecomposition | Sequence[Sequence[int]],
    w: int,
    *,
    index: ChainMergeIndex | None = None,
    on_iteration: Callable[[list[list[int]], list[list[int]]], None] | None = None,
) -> ChainDecomposition:
    """Turn a decomposition into at most ``w`` chains.

    The only queries are those of the ChainMerge build (skipped when a
    finished ``index`` over the same chains is supplied).
    """
    chains = [list(c) for c in (chains.chains if isinstance(chains, ChainDecomposition) else chains)]
    if len(chains) <= w:
        return ChainDecomposition(chains)
    if index is None:
        index = build(compare, chains)
    while len(chains) > w:
        nxt = peeling_iteration(chains, index.dominates)
        _check_peel_step(chains, nxt, index.dominates)
        if on_iteration is not None:
            on_iteration(chains, nxt)
        chains = nxt
    return ChainDecomposition(chains)


# ---------------------------------------------------------------------------
# mergesort
# ---------------------------------------------------------------------------


@dataclass
class MergesortStats:
    recursion_queries: int = 0
    final_queries: int = 0
    builds: list[tuple[int, int, int]] = field(default_factory=list)  # (queries, q, size)

    @property
    def total(self) -> int:
        return self.recursion_queries + self.final_queries


def poset_mergesort(
    n: int,
    oracle,
    w: int,
    *,
    elements: Sequence[int] | None = None,
    stats: MergesortStats | None = None,
    on_peel: Callable[[list[list[int]], ChainDecomposition], None] | None = None,
) -> ChainMergeIndex:
    """Split by id, sort both halves, then peel their union down to w chains.

    Relations inside a half are read off that half's index, so the merge
    only pays for pairs that straddle the two halves.
    """
    stats = stats if stats is not None else MergesortStats()
    elements = list(range(n)) if elements is None else list(elements)
    memo: dict[tuple[int, int], Verdict] = {}
    asked = 0

    def ask(x: int, y: int) -> Verdict:
        nonlocal asked
        if (x, y) not in memo:
            asked += 1
            v = oracle.query(x, y)
            memo[(x, y)], memo[(y, x)] = v, v.flip()
        return memo[(x, y)]

    def recurse(part: list[int]) -> tuple[list[list[int]], ChainMergeIndex | None]:
        if len(part) <= w:
            return [[x] for x in part], None
        mid = len(part) // 2
        left, right = part[:mid], part[mid:]
        lc, li = recurse(left)
        rc, ri = recurse(right)
        in_left = set(left)

        def compare(x: int, y: int) -> Verdict:
            xl, yl = x in in_left, y in in_left
            if xl and yl and li is not None:
                return li.lookup(x, y)
            if not xl and not yl and ri is not None:
                return ri.lookup(x, y)
            return ask(x, y)

        chains = lc + rc
        before = asked
        index = build(compare, chains)
        stats.builds.append((asked - before, len(chains), len(part)))
        if len(chains) > w:
            out = peel(None, chains, w, index=index)
            if on_peel is not None:
                on_peel(chains, out)
            chains = [list(c) for c in out]
        return chains, index

    chains, index = recurse(elements)
    stats.recursion_queries = asked
    if index is not None:
        final_compare = index.lookup
    else:
        final_compare = ask
    result = build(final_compare, chains)
    stats.final_queries = asked - stats.recursion_queries
    return result


# ---------------------------------------------------------------------------
# wrappers
# ---------------------------------------------------------------------------


def sort_unknown_width(
    n: int,
    oracle,
    *,
    on_attempt: Callable[[int, bool], None] | None = None,
    stats: MergesortStats | None = None,
) -> ChainMergeIndex:
    """Run mergesort with width bounds 2, 4, 8, ... until one succeeds.

    A successful run is always correct, whatever the true width.
    """
    bound = 2
    while True:
        try:
            result = poset_mergesort(n, oracle, bound, stats=stats)
        except WidthExceeded:
            if on_attempt is not None:
                on_attempt(bound, False)
            bound *= 2
            continue
        if on_attempt is not None:
            on_attempt(bound, True)
        return result


@dataclass
class TransitiveStats:
    phase1_queries: int = 0
    phase2_queries: int = 0
    chains: int = 0


def sort_transitive(
    n: int,
    adapter: TransitiveOracleAdapter,
    w: int,
    *,
    stats: TransitiveStats | None = None,
) -> np.ndarray:
    """Sort a transitive (not necessarily antisymmetric) relation.

    Returns the boolean table of the relation, diagonal excluded.
    """
    stats = stats if stats is not None else TransitiveStats()
    start = adapter.inner.count
    index = poset_mergesort(n, adapter, w)
    mid = adapter.inner.count
    table = recover_extra_relations(adapter, index)
    stats.phase1_queries = mid - start
    stats.phase2_queries = adapter.inner.count - mid
    stats.chains = index.q
    return table


SORTERS = {
    "bininsert": bin_insertion_sort,
    "entropy": entropy_sort,
    "mergesort": poset_mergesort,
}
