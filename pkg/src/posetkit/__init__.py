"""Sorting and selection in width-bounded partial orders, through a comparison oracle."""

from .chainmerge import ChainMergeIndex, build
from .core import (
    ChainDecomposition,
    ConstraintSet,
    GroundTruthPoset,
    Verdict,
    generate_chain_union,
    generate_transitive_relation,
    generate_width_bounded,
    heights_bruteforce,
    kselect_bruteforce,
    load_poset,
    min_chain_decomposition,
    width,
)
from .counting import SubOrder, count_width_extensions
from .oracle import InferenceCache, PosetOracle, QueryCounter, TransitiveOracle, TransitiveOracleAdapter
from .selection import kselect_det, kselect_rand, minimals_det, minimals_rand
from .sorting import (
    bin_insertion_sort,
    entropy_sort,
    peel,
    poset_mergesort,
    sort_transitive,
    sort_unknown_width,
    weighted_binary_search,
)

__all__ = [
    "ChainDecomposition", "ChainMergeIndex", "ConstraintSet", "GroundTruthPoset", "InferenceCache",
    "PosetOracle", "QueryCounter", "SubOrder", "TransitiveOracle", "TransitiveOracleAdapter", "Verdict",
    "bin_insertion_sort", "build", "count_width_extensions", "entropy_sort", "generate_chain_union",
    "generate_transitive_relation", "generate_width_bounded", "heights_bruteforce", "kselect_bruteforce",
    "kselect_det", "kselect_rand", "load_poset", "min_chain_decomposition", "minimals_det", "minimals_rand",
    "peel", "poset_mergesort", "sort_transitive", "sort_unknown_width", "weighted_binary_search", "width",
]
