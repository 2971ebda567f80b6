"""Finding the minimal elements, and more generally the bottom k levels."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .chainmerge import ChainMergeIndex
from .core import Verdict
from .errors import CandidateOverflow
from .sorting import MergesortStats, poset_mergesort

StepHook = Callable[[int, list[int]], None]


def _filter_minimals(order: Sequence[int], oracle, w: int, rng=None, on_step: StepHook | None = None) -> set[int]:
    cands: list[int] = []
    for t, x in enumerate(order):
        probe = cands if rng is None else [cands[i] for i in rng.permutation(len(cands))]
        beaten: set[int] = set()
        dominated = False
        for a in probe:
            v = oracle.query(x, a)
            if v is Verdict.DOMINATES:
                dominated = True
                break
            if v is Verdict.DOMINATED_BY:
                beaten.add(a)
        if not dominated:
            cands = [a for a in cands if a not in beaten]
            cands.append(x)
            if len(cands) > w:
                raise CandidateOverflow(f"{len(cands)} pairwise incomparable candidates, bound is {w}")
        if on_step is not None:
            on_step(t, list(cands))
    return set(cands)


def minimals_det(n: int, oracle, w: int, *, on_step: StepHook | None = None) -> set[int]:
    """Minimal elements with at most w queries per element."""
    return _filter_minimals(range(n), oracle, w, on_step=on_step)


def minimals_rand(n: int, oracle, w: int, seed=None, *, on_step: StepHook | None = None) -> set[int]:
    """Minimal elements, scanning elements and candidates in random order."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(n).tolist()
    return _filter_minimals(order, oracle, w, rng=rng, on_step=on_step)


def heights_in_index(index: ChainMergeIndex, elements: Sequence[int]) -> dict[int, int]:
    """Heights inside the sub-poset ``elements`` of a sorted index (no queries)."""
    elements = list(elements)
    table = index.relation_table()[np.ix_(elements, elements)]
    order = np.argsort(table.sum(axis=1), kind="stable")
    h = np.zeros(len(elements), dtype=np.int64)
    for i in order:
        below = np.flatnonzero(table[i])
        if len(below):
            h[i] = h[below].max() + 1
    return {elements[i]: int(h[i]) for i in range(len(elements))}


def _sort_and_trim(elements: list[int], oracle, w: int, k: int, stats_sink) -> tuple[list[int], dict[int, int], ChainMergeIndex]:
    stats = MergesortStats()
    index = poset_mergesort(len(elements), oracle, w, elements=elements, stats=stats)
    stats_sink.append(stats)
    h = heights_in_index(index, elements)
    kept = [x for x in elements if h[x] <= k - 1]
    return kept, h, index


def kselect_det(n: int, oracle, w: int, k: int, *, flushes: list | None = None) -> set[int]:
    """Bottom-k levels, sorting the survivors together with w*k new elements at a time.

    Everything below a surviving candidate survives too, so heights measured
    inside each sorted batch are the true heights of the survivors.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    flushes = flushes if flushes is not None else []
    kept: list[int] = []
    step = w * k
    for start in range(0, n, step):
        batch = kept + list(range(start, min(n, start + step)))
        kept, _, _ = _sort_and_trim(batch, oracle, w, k, flushes)
    return set(kept)


def kselect_rand(
    n: int,
    oracle,
    w: int,
    k: int,
    seed=None,
    *,
    on_step: Callable[[int, list[int], list[int]], None] | None = None,
    flushes: list | None = None,
) -> set[int]:
    """Bottom-k levels in random order, sorting only elements that might qualify.

    Each new element is compared with the maximal candidates (in random
    order).  It is discarded only once it is seen to dominate a candidate of
    height k-1; every other outcome defers it to the next sort.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    flushes = flushes if flushes is not None else []
    rng = np.random.default_rng(seed)
    order = rng.permutation(n).tolist()
    head = w * k
    if n <= head:
        kept, _, _ = _sort_and_trim(order, oracle, w, k, flushes)
        return set(kept)

    def refresh(elements):
        kept, h, index = _sort_and_trim(elements, oracle, w, k, flushes)
        kept_set = set(kept)
        tops = [a for a in kept if not any(index.dominates(b, a) for b in kept if b != a)]
        return kept, {a: h[a] for a in kept_set}, tops

    cands, height, tops = refresh(order[:head])
    pending: list[int] = []
    for t in range(head, n):
        x = order[t]
        defer = True
        for i in rng.permutation(len(tops)):
            a = tops[i]
            v = oracle.query(x, a)
            if v is Verdict.INCOMPARABLE:
                continue
            if v is Verdict.DOMINATES and height[a] == k - 1:
                defer = False
            break
        if defer:
            pending.append(x)
        if len(pending) == head or t == n - 1:
            cands, height, tops = refresh(cands + pending)
            pending = []
        if on_step is not None:
            on_step(t, list(cands), list(pending))
    return set(cands)
