"""Comparison oracles and the wrappers algorithms run them through.

Any object with ``query(x, y) -> Verdict`` is an oracle.  Wrappers compose:
``QueryCounter(InferenceCache(PosetOracle(p)))`` counts only what reaches the
cache, and so on.
"""

from __future__ import annotations

from typing import Protocol

import numpy as np

from .core import GroundTruthPoset, Verdict
from .errors import SelfQuery

UNKNOWN, ABOVE, BELOW, APART = 0, 1, 2, 3
_VERDICT = {ABOVE: Verdict.DOMINATES, BELOW: Verdict.DOMINATED_BY, APART: Verdict.INCOMPARABLE}


class Oracle(Protocol):
    def query(self, x: int, y: int) -> Verdict: ...


class PosetOracle:
    """Answers truthfully from a ground-truth poset."""

    def __init__(self, poset: GroundTruthPoset):
        self.poset = poset

    @property
    def n(self) -> int:
        return self.poset.n

    def query(self, x: int, y: int) -> Verdict:
        if x == y:
            raise SelfQuery(f"query({x}, {x})")
        return self.poset.relation(x, y)


class QueryCounter:
    def __init__(self, wrapped: Oracle):
        self.wrapped = wrapped
        self.count = 0

    def query(self, x: int, y: int) -> Verdict:
        if x == y:
            raise SelfQuery(f"query({x}, {x})")
        self.count += 1
        return self.wrapped.query(x, y)


class InferenceCache:
    """Forwards only queries whose answer does not follow from earlier answers.

    Known relations are kept transitively closed; incomparability is only
    remembered for pairs that were actually asked.
    """

    def __init__(self, wrapped: Oracle, n: int):
        self.wrapped = wrapped
        self.n = n
        self.known = np.zeros((n, n), dtype=np.int8)
        self.forwarded = 0
        self.inferred = 0

    def lookup(self, x: int, y: int) -> Verdict | None:
        code = int(self.known[x, y])
        return _VERDICT[code] if code else None

    def record(self, x: int, y: int, verdict: Verdict) -> None:
        if verdict is Verdict.DOMINATED_BY:
            x, y, verdict = y, x, Verdict.DOMINATES
        if verdict is Verdict.INCOMPARABLE:
            self.known[x, y] = self.known[y, x] = APART
            return
        # everything at or above x now dominates everything at or below y
        ups = np.flatnonzero(self.known[:, x] == ABOVE)
        ups = np.append(ups, x)
        downs = np.flatnonzero(self.known[y] == ABOVE)
        downs = np.append(downs, y)
        self.known[np.ix_(ups, downs)] = ABOVE
        self.known[np.ix_(downs, ups)] = BELOW

    def query(self, x: int, y: int) -> Verdict:
        if x == y:
            raise SelfQuery(f"query({x}, {x})")
        cached = self.lookup(x, y)
        if cached is not None:
            self.inferred += 1
            return cached
        self.forwarded += 1
        verdict = self.wrapped.query(x, y)
        self.record(x, y, verdict)
        return verdict

    def dominance_matrix(self) -> np.ndarray:
        return self.known == ABOVE


# ---------------------------------------------------------------------------
# transitive relations
# ---------------------------------------------------------------------------


class TransitiveOracle:
    """Ground truth for a transitive relation; one query reveals both directions."""

    def __init__(self, relation: np.ndarray):
        rel = np.asarray(relation, dtype=bool)
        self.relation = rel
        self.n = rel.shape[0]
        self.count = 0

    def query_pair(self, x: int, y: int) -> tuple[bool, bool]:
        if x == y:
            raise SelfQuery(f"query({x}, {x})")
        self.count += 1
        return bool(self.relation[x, y]), bool(self.relation[y, x])


class _TieBreakingOracle:
    """Turns four-valued transitive answers into poset verdicts."""

    def __init__(self, inner: TransitiveOracle):
        self.inner = inner
        self.mutual: set[tuple[int, int]] = set()

    def query(self, x: int, y: int) -> Verdict:
        fwd, back = self.inner.query_pair(x, y)
        if fwd and back:
            self.mutual.add((min(x, y), max(x, y)))
            return Verdict.DOMINATES if x > y else Verdict.DOMINATED_BY
        if fwd:
            return Verdict.DOMINATES
        if back:
            return Verdict.DOMINATED_BY
        return Verdict.INCOMPARABLE


class TransitiveOracleAdapter:
    """A poset oracle simulated on top of a transitive-relation oracle.

    Answers are inferred from earlier answers whenever possible; otherwise the
    inner oracle is asked.  For a mutually related pair the adapter commits to
    one direction: the higher id dominates the lower one.  Only pairs whose
    relation is not already implied reach that rule, so either direction keeps
    the accumulated answers acyclic.
    """

    def __init__(self, inner: TransitiveOracle):
        self.inner = inner
        self.n = inner.n
        self._tie = _TieBreakingOracle(inner)
        self.cache = InferenceCache(self._tie, inner.n)

    def query(self, x: int, y: int) -> Verdict:
        return self.cache.query(x, y)

    @property
    def mutual_pairs(self) -> set[tuple[int, int]]:
        return set(self._tie.mutual)

    def induced_order(self) -> np.ndarray:
        return self.cache.dominance_matrix()


def recover_extra_relations(adapter: TransitiveOracleAdapter, cm) -> np.ndarray:
    """Rebuild the full transitive relation from a finished sort of the induced poset.

    For every element x and every chain C_j (its own included) a merge scan
    finds the largest y in C_j with x ⊵ y, asking the inner oracle directly.
    The relation restricted to one chain is a prefix below each x, so each
    ordered chain pair costs at most |C_i| + |C_j| inner queries.  The
    diagonal (x ⊵ x) is not recovered and is left False.
    """
    inner = adapter.inner
    n = inner.n
    rel = np.zeros((n, n), dtype=bool)
    chains = [list(c) for c in cm.chains]
    for ci in chains:
        for cj in chains:
            p = 0
            for x in ci:
                while p < len(cj):
                    y = cj[p]
                    if y == x:
                        p += 1
                        continue
                    if not inner.query_pair(x, y)[0]:
                        break
                    p += 1
                for y in cj[:p]:
                    if y != x:
                        rel[x, y] = True
    return rel
