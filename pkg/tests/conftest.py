import numpy as np
import pytest
from hypothesis import strategies as st

from posetkit.core import GroundTruthPoset, transitive_closure


def diamond_poset():
    return GroundTruthPoset.from_edges(4, [(3, 1), (3, 2), (1, 0), (2, 0)])


def chain_poset(n):
    return GroundTruthPoset.from_edges(n, [(i + 1, i) for i in range(n - 1)])


def antichain_poset(n):
    return GroundTruthPoset(np.zeros((n, n), dtype=bool))


def disjoint_chains(*lengths):
    edges, start = [], 0
    for m in lengths:
        edges += [(start + i + 1, start + i) for i in range(m - 1)]
        start += m
    return GroundTruthPoset.from_edges(start, edges)


@st.composite
def posets(draw, min_n=1, max_n=8, density=None):
    """A random poset: random DAG along a random topological order, then closed."""
    n = draw(st.integers(min_n, max_n))
    order = draw(st.permutations(range(n)))
    p = density if density is not None else draw(st.sampled_from([0.1, 0.3, 0.6]))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i):
            if rng.random() < p:
                adj[order[i], order[j]] = True
    return GroundTruthPoset(transitive_closure(adj))


@pytest.fixture
def diamond():
    return diamond_poset()
