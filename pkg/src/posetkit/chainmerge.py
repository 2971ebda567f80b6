"""The ChainMerge index: O(1) relation lookups over a chain decomposition.

For every element x of chain C_i the index stores x's position in C_i and,
for every other chain C_j, the position of the largest element of C_j that x
dominates (-1 when x dominates nothing there).
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np

from .core import ChainDecomposition, GroundTruthPoset, Verdict
from .errors import InvalidDecomposition, SelfQuery

Comparator = Callable[[int, int], Verdict]
NONE = -1


class ChainMergeIndex:
    def __init__(self, chains: Sequence[Sequence[int]], reach: np.ndarray, comparisons: int = 0):
        self.chains: tuple[tuple[int, ...], ...] = tuple(tuple(c) for c in chains)
        size = 1 + max((x for c in self.chains for x in c), default=-1)
        self.chain_of = np.full(size, -1, dtype=np.int64)
        self.position = np.full(size, -1, dtype=np.int64)
        for i, c in enumerate(self.chains):
            for k, x in enumerate(c):
                self.chain_of[x] = i
                self.position[x] = k
        self.reach = reach
        self.comparisons = comparisons

    @property
    def q(self) -> int:
        return len(self.chains)

    @property
    def decomposition(self) -> ChainDecomposition:
        return ChainDecomposition(self.chains)

    def elements(self) -> list[int]:
        return sorted(x for c in self.chains for x in c)

    def dominates(self, x: int, y: int) -> bool:
        i, j = self.chain_of[x], self.chain_of[y]
        if i == j:
            return self.position[x] > self.position[y]
        return self.reach[x, j] >= self.position[y]

    def lookup(self, x: int, y: int) -> Verdict:
        if x == y:
            raise SelfQuery(f"lookup({x}, {x})")
        if self.dominates(x, y):
            return Verdict.DOMINATES
        if self.dominates(y, x):
            return Verdict.DOMINATED_BY
        return Verdict.INCOMPARABLE

    def relation_table(self) -> np.ndarray:
        """Boolean matrix over all indexed ids: ``[x, y]`` is True iff x > y."""
        size = len(self.chain_of)
        table = np.zeros((size, size), dtype=bool)
        for x in self.elements():
            table[x] = self.dominates_row(x)
        return table

    def dominates_row(self, x: int) -> np.ndarray:
        size = len(self.chain_of)
        row = np.zeros(size, dtype=bool)
        i = self.chain_of[x]
        for j, c in enumerate(self.chains):
            top = self.position[x] - 1 if j == i else self.reach[x, j]
            if top >= 0:
                row[list(c[: top + 1])] = True
        return row

    def to_poset(self) -> GroundTruthPoset:
        return GroundTruthPoset(self.relation_table())

    def dump(self) -> str:
        """Plain-text dump: chains, then each element's reach row."""
        lines = [f"chains {self.q}"]
        for i, c in enumerate(self.chains):
            lines.append(f"chain {i}: " + " ".join(map(str, c)))
        lines.append("reach  # element chain position | reach per chain (-1 = none)")
        for x in self.elements():
            row = " ".join(str(int(v)) for v in self.reach[x])
            lines.append(f"{x} {int(self.chain_of[x])} {int(self.position[x])} | {row}")
        return "\n".join(lines) + "\n"


def _check_chains(chains: Sequence[Sequence[int]]) -> None:
    seen = set()
    for c in chains:
        if not len(c):
            raise InvalidDecomposition("empty chain")
        for x in c:
            if x in seen:
                raise InvalidDecomposition(f"element {x} appears twice")
            seen.add(x)


def build(compare: Comparator | object, chains: Iterable[Sequence[int]]) -> ChainMergeIndex:
    """Build the index with one bottom-up merge scan per ordered chain pair.

    ``compare`` is an oracle (anything with ``query``) or a bare comparator.
    The scan of (C_i, C_j) asks at most |C_i| + |C_j| questions, so a full
    build over q chains and n elements asks at most 2(q-1)n.
    """
    if not callable(compare):
        compare = compare.query
    chains = [list(c) for c in (chains.chains if isinstance(chains, ChainDecomposition) else chains)]
    _check_chains(chains)
    size = 1 + max((x for c in chains for x in c), default=-1)
    q = len(chains)
    reach = np.full((size, q), NONE, dtype=np.int64)
    comparisons_made = 0
    for i, ci in enumerate(chains):
        for k, x in enumerate(ci):
            reach[x, i] = k - 1
        for j, cj in enumerate(chains):
            if i == j:
                continue
            p = 0
            for x in ci:
                while p < len(cj):
                    comparisons_made += 1
                    if compare(x, cj[p]) is not Verdict.DOMINATES:
                        break
                    p += 1
                reach[x, j] = p - 1
    return ChainMergeIndex(chains, reach, comparisons=comparisons_made)
