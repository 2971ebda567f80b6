"""Ground-truth posets, instance generators and brute-force reference routines.

Everything here is oracle-free: it sees the full relation matrix and is used
to simulate oracles and to check the output of the query-based algorithms.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CycleError, ParseError


class Verdict(enum.Enum):
    DOMINATES = ">"
    DOMINATED_BY = "<"
    INCOMPARABLE = "~"

    def flip(self) -> "Verdict":
        if self is Verdict.DOMINATES:
            return Verdict.DOMINATED_BY
        if self is Verdict.DOMINATED_BY:
            return Verdict.DOMINATES
        return self


def transitive_closure(adj: np.ndarray) -> np.ndarray:
    """Warshall closure of a boolean adjacency matrix (returns a new array)."""
    d = np.array(adj, dtype=bool, copy=True)
    for k in range(d.shape[0]):
        col = d[:, k]
        if col.any():
            d[col] |= d[k]
    return d


@dataclass(frozen=True, eq=False)
class GroundTruthPoset:
    """A complete partial order; ``dominates[x, y]`` is True iff x > y."""

    dominates: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.dominates, dtype=bool)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("relation matrix must be square")
        d = d.copy()
        d.setflags(write=False)
        object.__setattr__(self, "dominates", d)

    @property
    def n(self) -> int:
        return self.dominates.shape[0]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "GroundTruthPoset":
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u, v] = True
        closed = transitive_closure(adj)
        if closed.diagonal().any():
            bad = int(np.flatnonzero(closed.diagonal())[0])
            raise CycleError(f"element {bad} would dominate itself")
        return cls(closed)

    def relation(self, x: int, y: int) -> Verdict:
        if self.dominates[x, y]:
            return Verdict.DOMINATES
        if self.dominates[y, x]:
            return Verdict.DOMINATED_BY
        return Verdict.INCOMPARABLE

    def is_valid(self) -> bool:
        d = self.dominates
        if d.diagonal().any() or (d & d.T).any():
            return False
        return not (_two_step(d) & ~d).any()

    def covers(self) -> list[tuple[int, int]]:
        """Cover pairs (the Hasse diagram edges), sorted."""
        d = self.dominates
        xs, ys = np.nonzero(d & ~_two_step(d))
        return sorted(zip(xs.tolist(), ys.tolist()))

    def restrict(self, elements: Sequence[int]) -> "GroundTruthPoset":
        idx = np.asarray(elements, dtype=int)
        return GroundTruthPoset(self.dominates[np.ix_(idx, idx)])

    def __eq__(self, other):
        if not isinstance(other, GroundTruthPoset):
            return NotImplemented
        return np.array_equal(self.dominates, other.dominates)

    __hash__ = None


@dataclass(frozen=True)
class ChainDecomposition:
    """Chains listed ascending: ``chain[0]`` is the smallest element."""

    chains: tuple[tuple[int, ...], ...]

    def __init__(self, chains: Iterable[Iterable[int]]):
        object.__setattr__(self, "chains", tuple(tuple(int(x) for x in c) for c in chains))

    def __len__(self) -> int:
        return len(self.chains)

    def __iter__(self):
        return iter(self.chains)

    def elements(self) -> list[int]:
        return [x for c in self.chains for x in c]

    def is_valid(self, p: GroundTruthPoset, universe: Iterable[int] | None = None) -> bool:
        """Chains are nonempty, partition ``universe`` and ascend under ``p``."""
        elems = self.elements()
        want = sorted(range(p.n) if universe is None else universe)
        if sorted(elems) != want:
            return False
        for c in self.chains:
            if not c:
                return False
            for lo, hi in zip(c, c[1:]):
                if not p.dominates[hi, lo]:
                    return False
        return True


@dataclass(frozen=True)
class ConstraintSet:
    """Pairs ``(a, b)`` meaning a > b must hold (enforced) or must not (prohibited)."""

    enforced: frozenset = field(default_factory=frozenset)
    prohibited: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "enforced", frozenset(self.enforced))
        object.__setattr__(self, "prohibited", frozenset(self.prohibited))
        if self.enforced & self.prohibited:
            raise ValueError("a pair cannot be both enforced and prohibited")


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def _parse_lines(text: str | bytes) -> tuple[int, list[tuple[int, int]]]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise ParseError(f"line {lineno}: expected 'n <count>', got {raw!r}")
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"line {lineno}: bad element count {parts[1]!r}") from None
            if n < 0:
                raise ParseError(f"line {lineno}: negative element count")
            continue
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected '<u> <v>', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer label in {raw!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"line {lineno}: label out of range [0, {n})")
        edges.append((u, v))
    if n is None:
        raise ParseError("missing 'n <count>' header")
    return n, edges


def load_poset(text: str | bytes) -> GroundTruthPoset:
    """Parse the poset file format and close the listed relations transitively."""
    n, edges = _parse_lines(text)
    return GroundTruthPoset.from_edges(n, edges)


def load_relation(text: str | bytes) -> np.ndarray:
    """Parse the same format as a transitive relation; cycles are allowed.

    The diagonal is always False in the returned table.
    """
    n, edges = _parse_lines(text)
    adj = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        adj[u, v] = True
    rel = transitive_closure(adj)
    np.fill_diagonal(rel, False)
    return rel


def dump_poset(p: GroundTruthPoset, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"n {p.n}")
    lines.extend(f"{u} {v}" for u, v in p.covers())
    return "\n".join(lines) + "\n"


def dump_relation(rel: np.ndarray) -> str:
    n = rel.shape[0]
    xs, ys = np.nonzero(rel)
    lines = [f"n {n}"] + [f"{u} {v}" for u, v in zip(xs.tolist(), ys.tolist()) if u != v]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def _chain_assignment(n: int, w: int, rng: np.random.Generator) -> list[list[int]]:
    color = rng.integers(0, w, size=n)
    chains = []
    for c in range(w):
        members = np.flatnonzero(color == c)
        chains.append(rng.permutation(members).tolist())
    return chains


def generate_chain_union(n: int, w: int, seed: int | None = None) -> GroundTruthPoset:
    """Sample from D(n, w): ``w`` mutually incomparable, uniformly ordered chains."""
    if not 1 <= w <= max(n, 1):
        raise ValueError(f"need 1 <= w <= n, got n={n}, w={w}")
    rng = np.random.default_rng(seed)
    d = np.zeros((n, n), dtype=bool)
    for chain in _chain_assignment(n, w, rng):
        for i, hi in enumerate(chain):
            d[hi, chain[:i]] = True
    return GroundTruthPoset(d)


def generate_width_bounded(
    n: int, w: int, seed: int | None = None, p: float | None = None
) -> GroundTruthPoset:
    """A random poset of width <= w: a D(n, w) sample plus random cross edges.

    Cross edges follow a random interleaving of the chains so that no cycle can
    form; each admissible pair is kept with probability ``p`` (default 1/w).
    """
    if not 1 <= w <= max(n, 1):
        raise ValueError(f"need 1 <= w <= n, got n={n}, w={w}")
    rng = np.random.default_rng(seed)
    p = 1.0 / w if p is None else p
    chains = _chain_assignment(n, w, rng)
    # keys increase along each chain; a > b is only ever added when key[a] > key[b]
    key = np.empty(n)
    chain_of = np.empty(n, dtype=int)
    for c, chain in enumerate(chains):
        key[chain] = np.sort(rng.random(len(chain)))
        chain_of[chain] = c
    adj = np.zeros((n, n), dtype=bool)
    for chain in chains:
        for lo, hi in zip(chain, chain[1:]):
            adj[hi, lo] = True
    cross = (chain_of[:, None] != chain_of[None, :]) & (key[:, None] > key[None, :])
    adj |= cross & (rng.random((n, n)) < p)
    return GroundTruthPoset(transitive_closure(adj))


# ---------------------------------------------------------------------------
# Dilworth
# ---------------------------------------------------------------------------


def _two_step(d: np.ndarray) -> np.ndarray:
    """Pairs joined by a path of length two (float matmul, so BLAS does the work)."""
    f = d.astype(np.float32)
    return (f @ f) > 0


def max_matching(d: np.ndarray) -> np.ndarray:
    """Maximum matching of the bipartite graph "x above y" on a closed relation.

    Returns ``below`` with ``below[x] = y`` for matched pairs and -1 elsewhere.
    A greedy matching along cover pairs is grown by augmenting paths found
    with row-vectorised breadth-first search; right vertices explored by a
    failed search stay marked until the next successful augmentation.
    """
    m = d.shape[0]
    below = np.full(m, -1, dtype=np.int64)
    above = np.full(m, -1, dtype=np.int64)
    if m == 0:
        return below
    covers = d & ~_two_step(d)
    for x in range(m):
        for y in np.flatnonzero(covers[x]):
            if above[y] < 0:
                below[x], above[y] = y, x
                break
    visited = np.zeros(m, dtype=bool)
    for root in range(m):
        if below[root] >= 0:
            continue
        parent = {}
        frontier = np.array([root])
        found = -1
        while frontier.size and found < 0:
            rows = d[frontier]
            fresh = np.flatnonzero(rows.any(axis=0) & ~visited)
            if not fresh.size:
                break
            visited[fresh] = True
            finder = frontier[rows[:, fresh].argmax(axis=0)]
            parent.update(zip(fresh.tolist(), finder.tolist()))
            free = fresh[above[fresh] < 0]
            if free.size:
                found = int(free[0])
            frontier = above[fresh][above[fresh] >= 0]
        if found < 0:
            continue
        y = found
        while True:
            x = parent[y]
            prev = int(below[x])
            below[x], above[y] = y, x
            if x == root:
                break
            y = prev
        visited[:] = False
    return below


def _chains_from_matrix(d: np.ndarray) -> list[list[int]]:
    """Minimum chain cover of a transitively closed relation, by bipartite matching."""
    m = d.shape[0]
    if m == 0:
        return []
    match = max_matching(np.asarray(d, dtype=bool))
    below = {int(x): int(y) for x, y in enumerate(match) if y >= 0}
    has_above = set(below.values())
    chains = []
    for top in range(m):
        if top in has_above:
            continue
        chain = [top]
        while chain[-1] in below:
            chain.append(below[chain[-1]])
        chains.append(chain[::-1])
    return chains


def min_chain_decomposition(p: GroundTruthPoset) -> ChainDecomposition:
    return ChainDecomposition(_chains_from_matrix(p.dominates))


def width(p: GroundTruthPoset) -> int:
    """n minus a maximum matching on the closure (Dilworth via Konig)."""
    return p.n - int((max_matching(p.dominates) >= 0).sum())


def max_antichain_bruteforce(p: GroundTruthPoset) -> int:
    """Largest antichain by exhaustive subset search; exponential, for n <= ~16."""
    comparable = p.dominates | p.dominates.T
    best = 0 if p.n == 0 else 1
    for size in range(2, p.n + 1):
        found = False
        for subset in itertools.combinations(range(p.n), size):
            idx = np.asarray(subset)
            if not comparable[np.ix_(idx, idx)].any():
                found = True
                break
        if not found:
            break
        best = size
    return best


# ---------------------------------------------------------------------------
# heights
# ---------------------------------------------------------------------------


def heights_bruteforce(p: GroundTruthPoset) -> dict[int, int]:
    """Height of every element: the longest chain strictly below it."""
    d = p.dominates
    order = sorted(range(p.n), key=lambda x: int(d[x].sum()))
    h: dict[int, int] = {}
    for x in order:
        below = np.flatnonzero(d[x])
        h[x] = 1 + max(h[int(y)] for y in below) if len(below) else 0
    return h


def kselect_bruteforce(p: GroundTruthPoset, k: int) -> set[int]:
    if k < 1:
        raise ValueError("k must be >= 1")
    return {x for x, h in heights_bruteforce(p).items() if h <= k - 1}


def is_linear_extension(p: GroundTruthPoset, order: Sequence[int]) -> bool:
    if sorted(order) != list(range(p.n)):
        return False
    pos = np.empty(p.n, dtype=int)
    pos[np.asarray(order, dtype=int)] = np.arange(p.n)
    xs, ys = np.nonzero(p.dominates)
    return bool((pos[xs] > pos[ys]).all())


# ---------------------------------------------------------------------------
# counting bounds
# ---------------------------------------------------------------------------


def log2_factorial(n: int) -> float:
    return math.lgamma(n + 1) / math.log(2)


def nposets_bounds(n: int, w: int) -> tuple[float, float]:
    """log2 of the two-sided bound on the number of width-<=w posets on n elements."""
    if n < 1 or w < 1:
        raise ValueError("need n >= 1 and w >= 1")
    log_n = math.log2(n)
    lower = (
        log2_factorial(n) - log2_factorial(w) + 2 * n * (w - 1) - 24 * w * (w - 1) * log_n
    )
    upper = (
        log2_factorial(n)
        + 2 * n * (w - 1)
        - ((w - 2) * (w - 1) / 2) * log_n
        + (w * (w - 1) / 2) * math.log2(w)
    )
    return lower, upper


def generate_transitive_relation(
    n: int, w: int, mutual: int | None = None, seed: int | None = None
) -> np.ndarray:
    """A transitive relation of width <= w that need not be antisymmetric.

    Starts from :func:`generate_width_bounded`, makes up to ``mutual`` random
    pairs related both ways, and closes.  The diagonal is left False.
    """
    rng = np.random.default_rng(seed)
    base = generate_width_bounded(n, w, seed=int(rng.integers(2**32)))
    adj = base.dominates.copy()
    count = n if mutual is None else mutual
    for _ in range(int(rng.integers(0, count + 1)) if mutual is None else count):
        if n < 2:
            break
        x, y = rng.choice(n, size=2, replace=False)
        adj[x, y] = adj[y, x] = True
    rel = transitive_closure(adj)
    np.fill_diagonal(rel, False)
    return rel
