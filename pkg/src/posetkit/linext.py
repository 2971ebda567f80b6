"""Ternary search trees, linear extensions, and heights from an extension."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Verdict
from .errors import InvalidExtension, WidthExceeded


@dataclass
class TernaryTree:
    """Root plus three subtrees: elements below, incomparable to, and above it."""

    root: int
    below: "TernaryTree | None" = None
    middle: "TernaryTree | None" = None
    above: "TernaryTree | None" = None
    size: int = 1

    def children(self):
        return (self.below, self.middle, self.above)

    def nodes(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(c for c in node.children() if c is not None)

    @property
    def weight(self) -> int:
        """Total comparisons made while building: each node compares its subtree to its root."""
        return sum(node.size - 1 for node in self.nodes())

    def elements(self) -> list[int]:
        return sorted(node.root for node in self.nodes())


def build_ternary_tree(n: int, oracle, seed=None, *, elements: Sequence[int] | None = None) -> TernaryTree | None:
    """Pick a uniform random root, split the rest three ways, recurse."""
    rng = np.random.default_rng(seed)
    elements = list(range(n)) if elements is None else list(elements)
    if not elements:
        return None

    def split(universe: list[int]) -> tuple[TernaryTree, list[list[int]]]:
        root = universe[int(rng.integers(len(universe)))]
        parts: list[list[int]] = [[], [], []]
        for y in universe:
            if y == root:
                continue
            v = oracle.query(y, root)
            parts[0 if v is Verdict.DOMINATED_BY else 2 if v is Verdict.DOMINATES else 1].append(y)
        return TernaryTree(root, size=len(universe)), parts

    top, parts = split(elements)
    stack = [(top, parts)]
    while stack:
        node, parts = stack.pop()
        for slot, universe in zip(("below", "middle", "above"), parts):
            if universe:
                child, child_parts = split(universe)
                setattr(node, slot, child)
                stack.append((child, child_parts))
    return top


def linear_extension(tree: TernaryTree | None) -> list[int]:
    """Below-subtree, root, middle-subtree, above-subtree, recursively."""
    out: list[int] = []
    # stack holds either trees to expand or single elements to emit
    stack: list = [tree]
    while stack:
        item = stack.pop()
        if item is None:
            continue
        if isinstance(item, TernaryTree):
            stack.extend([item.above, item.middle, item.root, item.below])
        else:
            out.append(item)
    return out


def heights_from_extension(
    ext: Sequence[int],
    oracle,
    w: int,
    *,
    stats: dict | None = None,
    check_monotone: bool = False,
) -> dict[int, int]:
    """Heights of all elements, processing a linear extension left to right.

    levels[h] holds the processed elements of height h.  A new element has
    height > h exactly when it dominates some member of levels[h], and that
    test is monotone in h, so each element needs a binary search over levels.
    """
    levels: list[list[int]] = []
    heights: dict[int, int] = {}
    max_frontier = 0

    def above_level(x: int, h: int) -> bool:
        for s in levels[h]:
            v = oracle.query(x, s)
            if v is Verdict.DOMINATES:
                return True
            if v is Verdict.DOMINATED_BY:
                raise InvalidExtension(f"{s} precedes {x} but dominates it")
        return False

    for x in ext:
        lo, hi = 0, len(levels)
        while lo < hi:
            mid = (lo + hi) // 2
            if above_level(x, mid):
                lo = mid + 1
            else:
                hi = mid
        if check_monotone:
            flags = [above_level(x, h) for h in range(len(levels))]
            if any(not a and b for a, b in zip(flags, flags[1:])) or sum(flags) != lo:
                raise InvalidExtension(f"level tests for {x} are not monotone: {flags}")
        if lo == len(levels):
            levels.append([])
        levels[lo].append(x)
        if len(levels[lo]) > w:
            raise WidthExceeded(f"{len(levels[lo])} elements share height {lo}, bound is {w}")
        max_frontier = max(max_frontier, len(levels[lo]))
        heights[x] = lo
    if stats is not None:
        stats["max_frontier"] = max_frontier
        stats["levels"] = len(levels)
    return heights
