"""Exact counting of width-bounded posets and of their constrained extensions.

Two independent routes are provided:

* :func:`poset_family` enumerates every labelled poset of width <= w on
  ``m`` elements as a vector of relation bitmasks.  Counting then reduces to
  vectorised masking, which is what EntropySort uses.
* :func:`count_width_extensions` with ``method="backtrack"`` decides one
  element pair at a time, pruning on transitivity; it shares no code with the
  enumerator and serves as its cross-check.
"""

from __future__ import annotations

import functools
import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import ConstraintSet, GroundTruthPoset
from .errors import CapExceeded

DEFAULT_CAP = 8

# (m, w) pairs whose full family fits comfortably in memory (<= ~25M masks)
_ENUMERABLE_LIMIT = 25_000_000


def exhaustive_cap() -> int:
    raw = os.environ.get("POSETKIT_EXHAUSTIVE_CAP")
    return int(raw) if raw else DEFAULT_CAP


def bit(m: int, a: int, b: int) -> int:
    """Bit position of the pair "a > b" in an m-element relation mask."""
    return a * m + b


def _pair_mask(m: int, rows: Iterable[int], cols: Iterable[int]) -> np.int64:
    cols = list(cols)
    mask = 0
    for a in rows:
        for b in cols:
            if a != b:
                mask |= 1 << bit(m, a, b)
    return np.int64(mask)


@functools.lru_cache(maxsize=8)
def poset_family(m: int, w: int) -> np.ndarray:
    """All labelled posets on ``range(m)`` with width <= w, as int64 bitmasks.

    Built one element at a time: the new element ``k`` picks a down-set D and
    an up-set U of the current poset with every element of U above every
    element of D, and is rejected if it closes an antichain of size w + 1.
    """
    if m * m > 64:
        raise CapExceeded(f"bitmask encoding supports at most 8 elements, got {m}")
    if m == 0:
        return np.zeros(1, dtype=np.int64)
    fam = np.zeros(1, dtype=np.int64)
    for k in range(1, m):
        old = range(k)
        parts = []
        for assign in itertools.product((0, 1, 2), repeat=k):
            down = [i for i in old if assign[i] == 1]
            up = [i for i in old if assign[i] == 2]
            rest = [i for i in old if assign[i] == 0]
            not_down = [i for i in old if assign[i] != 1]
            not_up = [i for i in old if assign[i] != 2]
            leaks_down = _pair_mask(m, down, not_down)
            leaks_up = _pair_mask(m, not_up, up)
            bridge = _pair_mask(m, up, down)
            ok = ((fam & leaks_down) == 0) & ((fam & leaks_up) == 0) & ((fam & bridge) == bridge)
            sub = fam[ok]
            if len(rest) >= w:
                for group in itertools.combinations(rest, w):
                    if not len(sub):
                        break
                    sub = sub[(sub & _pair_mask(m, group, group)) != 0]
            if not len(sub):
                continue
            add = 0
            for d in down:
                add |= 1 << bit(m, k, d)
            for u in up:
                add |= 1 << bit(m, u, k)
            parts.append(sub | np.int64(add))
        fam = np.concatenate(parts)
        if len(fam) > _ENUMERABLE_LIMIT:
            raise CapExceeded(f"family of width-{w} posets on {m} elements is too large")
    fam.setflags(write=False)
    return fam


def family_is_enumerable(m: int, w: int) -> bool:
    return m <= 7 or (m == 8 and w <= 2)


def count_posets(m: int, w: int) -> int:
    """Number of labelled posets on m elements of width <= w."""
    return len(poset_family(m, min(w, max(m, 1))))


def mask_from_poset(p: GroundTruthPoset) -> int:
    m = p.n
    xs, ys = np.nonzero(p.dominates)
    out = 0
    for a, b in zip(xs.tolist(), ys.tolist()):
        out |= 1 << bit(m, a, b)
    return out


def poset_from_mask(mask: int, m: int) -> GroundTruthPoset:
    d = np.zeros((m, m), dtype=bool)
    for a in range(m):
        for b in range(m):
            if a != b and (int(mask) >> bit(m, a, b)) & 1:
                d[a, b] = True
    return GroundTruthPoset(d)


# ---------------------------------------------------------------------------
# constrained counting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubOrder:
    """A known order on a subset of element ids (the already-inserted elements)."""

    elements: tuple[int, ...]
    pairs: frozenset

    @classmethod
    def empty(cls) -> "SubOrder":
        return cls((), frozenset())

    @classmethod
    def of(cls, p: GroundTruthPoset, elements: Iterable[int]) -> "SubOrder":
        elems = tuple(sorted(int(e) for e in elements))
        pairs = frozenset((a, b) for a in elems for b in elems if p.dominates[a, b])
        return cls(elems, pairs)


def count_width_extensions(
    known: SubOrder,
    uninserted: Iterable[int],
    constraints: ConstraintSet | None,
    w: int,
    *,
    method: str = "auto",
    cap: int | None = None,
) -> int:
    """Count width-<=w posets on known ∪ uninserted that extend ``known``.

    The restriction to the known elements must equal ``known.pairs`` exactly;
    every enforced pair must hold and no prohibited pair may hold.
    """
    constraints = constraints or ConstraintSet()
    universe = sorted(set(known.elements) | {int(u) for u in uninserted})
    if set(known.elements) & set(int(u) for u in uninserted):
        raise ValueError("known and uninserted elements must be disjoint")
    cap = exhaustive_cap() if cap is None else cap
    m = len(universe)
    if m > cap:
        raise CapExceeded(f"{m} elements exceeds the exhaustive cap of {cap}")
    local = {e: i for i, e in enumerate(universe)}
    for a, b in itertools.chain(constraints.enforced, constraints.prohibited):
        if a not in local or b not in local:
            raise ValueError(f"constraint pair ({a}, {b}) outside the universe")
    known_local = {(local[a], local[b]) for a, b in known.pairs}
    fixed = [local[e] for e in known.elements]
    enforced = {(local[a], local[b]) for a, b in constraints.enforced}
    prohibited = {(local[a], local[b]) for a, b in constraints.prohibited}
    w = min(w, max(m, 1))

    if method == "auto":
        method = "enumerate" if family_is_enumerable(m, w) else "backtrack"
    if method == "enumerate":
        return _count_enumerate(m, w, fixed, known_local, enforced, prohibited)
    if method == "backtrack":
        return _count_backtrack(m, w, fixed, known_local, enforced, prohibited)
    raise ValueError(f"unknown method {method!r}")


def _count_enumerate(m, w, fixed, known, enforced, prohibited) -> int:
    fam = poset_family(m, w)
    must, must_not = 0, 0
    for a in fixed:
        for b in fixed:
            if a == b:
                continue
            if (a, b) in known:
                must |= 1 << bit(m, a, b)
            else:
                must_not |= 1 << bit(m, a, b)
    for a, b in enforced:
        must |= 1 << bit(m, a, b)
    for a, b in prohibited:
        must_not |= 1 << bit(m, a, b)
    if must & must_not:
        return 0
    must, must_not = np.int64(must), np.int64(must_not)
    return int(np.count_nonzero(((fam & must) == must) & ((fam & must_not) == 0)))


def _count_backtrack(m, w, fixed, known, enforced, prohibited) -> int:
    # state[a][b]: 1 if a > b, 0 if not, None if undecided
    state: list[list[int | None]] = [[None] * m for _ in range(m)]
    for a in range(m):
        state[a][a] = 0

    def decide(a, b, val) -> bool:
        cur = state[a][b]
        if cur is not None:
            return cur == val
        state[a][b] = val
        return True

    fixed_set = set(fixed)
    for a in fixed_set:
        for b in fixed_set:
            if a != b and not decide(a, b, int((a, b) in known)):
                return 0
    for a, b in enforced:
        if not decide(a, b, 1):
            return 0
    for a, b in prohibited:
        if not decide(a, b, 0):
            return 0

    pairs = [(a, b) for a in range(m) for b in range(a + 1, m)]
    choices = ((1, 0), (0, 1), (0, 0))

    def consistent(a, b) -> bool:
        # transitivity checks for every triple through the freshly decided pair
        for x, y in ((a, b), (b, a)):
            if state[x][y] != 1:
                continue
            if state[y][x] == 1:
                return False
            for z in range(m):
                if z in (x, y):
                    continue
                # z > x > y  =>  z > y
                if state[z][x] == 1 and state[z][y] == 0:
                    return False
                # x > y > z  =>  x > z
                if state[y][z] == 1 and state[x][z] == 0:
                    return False
        for x, y in ((a, b), (b, a)):
            if state[x][y] != 0:
                continue
            for z in range(m):
                if z in (x, y):
                    continue
                if state[x][z] == 1 and state[z][y] == 1:
                    return False
        return True

    def width_ok() -> bool:
        comparable = [0] * m
        for a in range(m):
            for b in range(m):
                if state[a][b] == 1 or state[b][a] == 1:
                    comparable[a] |= 1 << b
        for group in itertools.combinations(range(m), w + 1):
            if all(not (comparable[x] >> y) & 1 for x, y in itertools.combinations(group, 2)):
                return False
        return True

    def rec(i: int) -> int:
        if i == len(pairs):
            return 1 if width_ok() else 0
        a, b = pairs[i]
        saved = (state[a][b], state[b][a])
        total = 0
        for ab, ba in choices:
            if (saved[0] is not None and saved[0] != ab) or (saved[1] is not None and saved[1] != ba):
                continue
            state[a][b], state[b][a] = ab, ba
            if consistent(a, b):
                total += rec(i + 1)
        state[a][b], state[b][a] = saved
        return total

    # pairs fixed before the search must themselves be consistent
    for a, b in pairs:
        if state[a][b] is not None and state[b][a] is not None and not consistent(a, b):
            return 0
    return rec(0)


# ---------------------------------------------------------------------------
# candidate tracking for EntropySort
# ---------------------------------------------------------------------------


class CandidateSet:
    """The width-<=w posets on ``range(m)`` consistent with everything learned so far."""

    def __init__(self, m: int, w: int):
        self.m = m
        self.masks = poset_family(m, min(w, max(m, 1)))

    def __len__(self) -> int:
        return len(self.masks)

    def bits(self, a: int, b: int) -> np.ndarray:
        """0/1 vector: does a > b hold in each candidate?"""
        return ((self.masks >> np.int64(bit(self.m, a, b))) & 1).astype(np.int64)

    def keep(self, selector: np.ndarray) -> None:
        self.masks = self.masks[selector]
