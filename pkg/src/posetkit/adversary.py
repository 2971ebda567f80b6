"""Adaptive adversaries for minimal-element and k-selection, and lower-bound formulas.

The adversary answers "incomparable" to every pair involving an element that
has been queried fewer than w times.  Once an element reaches w-1 queries it
is committed to one of w chains (a colour) different from the colours of all
elements it was declared incomparable to.  Elements of different colours are
incomparable; inside a colour the higher index dominates.  The answers thus
always fit a disjoint union of w chains.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .core import GroundTruthPoset, Verdict
from .errors import ColorExhausted, DomainError, SelfQuery, WitnessMismatch

UNCOLORED = -1


class DeviationTable:
    """Per-colour deviation between how often a colour was chosen and its fair share.

    Stored as integers scaled by lcm(1..w) so every update is exact.
    """

    def __init__(self, w: int):
        self.w = w
        self.scale = math.lcm(*range(1, w + 1))
        self.scaled = [0] * w

    def values(self) -> list[Fraction]:
        return [Fraction(v, self.scale) for v in self.scaled]

    def pick(self, eligible) -> int:
        return min(eligible, key=lambda c: (self.scaled[c], c))

    def update(self, chosen: int, eligible) -> None:
        eligible = list(eligible)
        share = self.scale // len(eligible)
        for c in eligible:
            self.scaled[c] -= share
        self.scaled[chosen] += self.scale

    def invariants_hold(self) -> bool:
        if sum(self.scaled) != 0:
            return False
        acc = 0
        for m, v in enumerate(sorted(self.scaled), start=1):
            acc += v
            # acc / scale >= m (m - w) / 2
            if 2 * acc < self.scale * m * (m - self.w):
                return False
        return True


class MinAdversary:
    """Oracle that invents answers to force many queries.

    ``mode="min"`` commits an element to the eligible colour with the fewest
    members; ``mode="ksel"`` to the eligible colour of smallest deviation.
    Ties go to the lowest colour id.
    """

    def __init__(self, n: int, w: int, *, mode: str = "min", seed=None):
        if mode not in ("min", "ksel"):
            raise ValueError(f"unknown mode {mode!r}")
        if w < 1:
            raise ValueError("w must be at least 1")
        self.n, self.w, self.mode = n, w, mode
        if seed is None:
            self.index = np.arange(n)
        else:
            self.index = np.random.default_rng(seed).permutation(n)
        self.counts = np.zeros(n, dtype=np.int64)
        self.color = np.full(n, UNCOLORED, dtype=np.int64)
        self.members = [0] * w
        self.neighbors: list[set[int]] = [set() for _ in range(n)]
        self.deviation = DeviationTable(w)
        self.log: list[tuple[int, int, Verdict]] = []
        self.announcements: list[tuple[int, int]] = []
        if w == 1:
            for x in range(n):
                self._assign(x, 0)

    @property
    def count(self) -> int:
        return len(self.log)

    def _assign(self, x: int, c: int) -> None:
        self.color[x] = c
        self.members[c] += 1
        self.announcements.append((x, c))

    def eligible(self, x: int) -> list[int]:
        taken = {int(self.color[y]) for y in self.neighbors[x]}
        return [c for c in range(self.w) if c not in taken]

    def _commit(self, x: int) -> None:
        options = self.eligible(x)
        if not options:
            raise ColorExhausted(f"element {x} has neighbours in every colour")
        if self.mode == "min":
            c = min(options, key=lambda c: (self.members[c], c))
        else:
            c = self.deviation.pick(options)
            self.deviation.update(c, options)
        self._assign(x, c)

    def query(self, x: int, y: int) -> Verdict:
        if x == y:
            raise SelfQuery(f"query({x}, {x})")
        self.counts[x] += 1
        self.counts[y] += 1
        threshold = self.w - 1
        if self.counts[x] <= threshold or self.counts[y] <= threshold:
            self.neighbors[x].add(y)
            self.neighbors[y].add(x)
            for e in (x, y):
                if self.counts[e] == threshold and self.color[e] == UNCOLORED:
                    self._commit(e)
            verdict = Verdict.INCOMPARABLE
        elif self.color[x] != self.color[y]:
            verdict = Verdict.INCOMPARABLE
        else:
            verdict = Verdict.DOMINATES if self.index[x] > self.index[y] else Verdict.DOMINATED_BY
        self.log.append((x, y, verdict))
        return verdict


def finalize_witness(adv: MinAdversary) -> GroundTruthPoset:
    """A w-chain poset consistent with every answer the adversary gave.

    Uncommitted elements get a colour unused by their neighbours, preferring
    colours nobody has yet.  Raises WitnessMismatch if any logged answer
    disagrees with the result.
    """
    color = adv.color.copy()
    members = list(adv.members)
    for x in range(adv.n):
        if color[x] != UNCOLORED:
            continue
        taken = {int(color[y]) for y in adv.neighbors[x]}
        options = [c for c in range(adv.w) if c not in taken]
        if not options:
            raise ColorExhausted(f"no colour left for element {x}")
        c = min(options, key=lambda c: (members[c] > 0, c))
        color[x] = c
        members[c] += 1
    dom = np.zeros((adv.n, adv.n), dtype=bool)
    for c in range(adv.w):
        cls = np.flatnonzero(color == c)
        ranks = adv.index[cls]
        dom[np.ix_(cls, cls)] = ranks[:, None] > ranks[None, :]
    witness = GroundTruthPoset(dom)
    for x, y, verdict in adv.log:
        if witness.relation(x, y) is not verdict:
            raise WitnessMismatch(f"answer {verdict} to ({x}, {y}) contradicts the witness")
    return witness


# ---------------------------------------------------------------------------
# bound formulas
# ---------------------------------------------------------------------------


def log2_binom(a: float, b: float) -> float:
    """log2 of the (generalised) binomial coefficient C(a, b), via lgamma."""
    if b < 0 or b > a:
        raise DomainError(f"C({a}, {b}) is undefined here")
    return (math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)) / math.log(2)


def lower_bound_min(n: int, w: int) -> Fraction:
    if not 1 <= w <= n:
        raise DomainError("need 1 <= w <= n")
    return Fraction((w + 1) * n, 2) - w


def lower_bound_ksel_branches(n: int, w: int, k: int) -> tuple[float, float, float]:
    """(common part, first branch, second branch) of the k-selection lower bound."""
    r = n / (2 * w - 1)
    if k < 1 or k > r:
        raise DomainError(f"k={k} must lie in [1, n/(2w-1)] = [1, {r:.3f}]")
    common = (w + 1) * n / 2 - w * (k + math.log2(k)) - w**3 / 8
    first = (w - 1) * log2_binom(r, k - 1) + log2_binom(r * w, k - 1)
    second = n * (r - k) * (w - 1) / (2 * r) + log2_binom(n - (w - 1) * k, k - 1)
    return common, first, second


def lower_bound_ksel(n: int, w: int, k: int) -> float:
    common, first, second = lower_bound_ksel_branches(n, w, k)
    return common + min(first, second)


def random_ksel_bound(n: int, w: int, k: int) -> float:
    """Lower bound on the expected queries of any randomized k-selection algorithm."""
    if n < 2 * w:
        raise DomainError("need n >= 2w")
    tail = w * (1 - math.exp(-n / (8 * w))) * log2_binom(n / (2 * w), k - 1) if k > 1 else 0.0
    return (w + 3) * n / 4 - w * k + tail


def fussenegger_gabow(n: int, k: int) -> float:
    """Queries needed to find the k-th smallest of a total order on n elements."""
    if not 1 <= k <= n:
        raise DomainError("need 1 <= k <= n")
    return n - k + log2_binom(n, k - 1)
