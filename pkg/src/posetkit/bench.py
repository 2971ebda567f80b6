"""Run algorithms on generated instances and record query counts against budgets."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import bounds
from .core import (
    GroundTruthPoset,
    generate_chain_union,
    generate_width_bounded,
    heights_bruteforce,
    is_linear_extension,
    kselect_bruteforce,
)
from .counting import count_posets
from .linext import build_ternary_tree, heights_from_extension, linear_extension
from .oracle import PosetOracle, QueryCounter, TransitiveOracle, TransitiveOracleAdapter
from .selection import kselect_det, kselect_rand, minimals_det, minimals_rand
from .sorting import (
    MergesortStats,
    bin_insertion_sort,
    entropy_sort,
    poset_mergesort,
    sort_transitive,
    sort_unknown_width,
)

HEADER = ["algorithm", "n", "w", "k", "seed", "queries", "bound", "within_bound", "wall_time_ms"]
MODELS = {"chains": generate_chain_union, "width": generate_width_bounded}


@dataclass
class BenchRecord:
    algorithm: str
    n: int
    w: int
    k: int | None
    seed: int | None
    queries: int
    bound: float
    within_bound: bool
    wall_time_ms: float
    correct: bool = True

    def row(self) -> list[str]:
        return [
            self.algorithm,
            str(self.n),
            str(self.w),
            "" if self.k is None else str(self.k),
            "" if self.seed is None else str(self.seed),
            str(self.queries),
            f"{self.bound:.6f}",
            "true" if self.within_bound else "false",
            f"{self.wall_time_ms:.3f}",
        ]


@dataclass(frozen=True)
class BenchConfig:
    algorithms: tuple[str, ...] = ("mergesort",)
    n: int = 64
    w: int = 4
    k: int = 1
    model: str = "chains"
    trials: int = 10
    seed: int = 0
    jobs: int = 1


@dataclass
class Outcome:
    queries: int
    bound: float
    within: bool
    correct: bool
    extra: dict = field(default_factory=dict)


def _sort_outcome(p: GroundTruthPoset, index, queries: int, bound: float, within: bool) -> Outcome:
    n = p.n
    correct = bool(np.array_equal(index.relation_table()[:n, :n], p.dominates))
    return Outcome(queries, bound, within, correct)


def _run_bininsert(p, w, k, seed):
    o = QueryCounter(PosetOracle(p))
    idx = bin_insertion_sort(p.n, o, w)
    b = bounds.bininsert_bound(p.n, w)
    return _sort_outcome(p, idx, o.count, b, o.count <= b)


def _run_entropy(p, w, k, seed):
    o = QueryCounter(PosetOracle(p))
    idx = entropy_sort(p.n, o, w)
    count = count_posets(p.n, w)
    return _sort_outcome(p, idx, o.count, bounds.entropy_bound(count, p.n, w), bounds.entropy_ok(o.count, count, p.n, w))


def _run_mergesort(p, w, k, seed):
    o = QueryCounter(PosetOracle(p))
    st = MergesortStats()
    idx = poset_mergesort(p.n, o, w, stats=st)
    within = bounds.mergesort_recursion_ok(st.recursion_queries, p.n, w) and st.final_queries <= 2 * w * p.n
    return _sort_outcome(p, idx, o.count, bounds.mergesort_total_bound(p.n, w), within)


def _run_unknown_width(p, w, k, seed):
    o = QueryCounter(PosetOracle(p))
    tried: list[int] = []
    idx = sort_unknown_width(p.n, o, on_attempt=lambda b, ok: tried.append(b))
    b = bounds.unknown_width_bound(p.n, tried)
    out = _sort_outcome(p, idx, o.count, b, o.count <= b)
    out.extra["attempts"] = tried
    return out


def _run_transitive(p, w, k, seed):
    inner = TransitiveOracle(p.dominates)
    table = sort_transitive(p.n, TransitiveOracleAdapter(inner), w)
    b = bounds.mergesort_total_bound(p.n, w) + 2 * p.n * w
    return Outcome(inner.count, b, inner.count <= b, bool(np.array_equal(table, p.dominates)))


def _run_minimals(fn, randomized):
    def run(p, w, k, seed):
        o = QueryCounter(PosetOracle(p))
        got = fn(p.n, o, w, seed) if randomized else fn(p.n, o, w)
        if randomized:
            b = bounds.minimals_rand_expectation(p.n, w)
        else:
            b = bounds.minimals_det_bound(p.n, w)
        return Outcome(o.count, b, o.count <= b, got == kselect_bruteforce(p, 1))

    return run


def _run_kselect_det(p, w, k, seed):
    o = QueryCounter(PosetOracle(p))
    got = kselect_det(p.n, o, w, k)
    return Outcome(
        o.count, bounds.kselect_det_bound(p.n, w, k), bounds.kselect_det_ok(o.count, p.n, w, k),
        got == kselect_bruteforce(p, k),
    )


def _run_kselect_rand(p, w, k, seed):
    o = QueryCounter(PosetOracle(p))
    got = kselect_rand(p.n, o, w, k, seed)
    b = bounds.kselect_rand_expectation(p.n, w, k)
    return Outcome(o.count, b, o.count <= b, got == kselect_bruteforce(p, k))


def _run_ternary(p, w, k, seed):
    o = QueryCounter(PosetOracle(p))
    tree = build_ternary_tree(p.n, o, seed)
    b = bounds.ternary_weight_envelope(p.n, w)
    ok = is_linear_extension(p, linear_extension(tree)) and tree.weight == o.count
    return Outcome(o.count, b, o.count <= b, ok)


def _run_heights(p, w, k, seed):
    ext = linear_extension(build_ternary_tree(p.n, PosetOracle(p), seed))
    o = QueryCounter(PosetOracle(p))
    got = heights_from_extension(ext, o, w)
    b = bounds.heights_envelope(p.n, w)
    return Outcome(o.count, b, o.count <= b, got == heights_bruteforce(p))


RUNNERS: dict[str, Callable] = {
    "bininsert": _run_bininsert,
    "entropy": _run_entropy,
    "mergesort": _run_mergesort,
    "unknown-width": _run_unknown_width,
    "transitive": _run_transitive,
    "minimals-det": _run_minimals(minimals_det, False),
    "minimals-rand": _run_minimals(minimals_rand, True),
    "kselect-det": _run_kselect_det,
    "kselect-rand": _run_kselect_rand,
    "ternary": _run_ternary,
    "heights": _run_heights,
}

USES_K = {"kselect-det", "kselect-rand"}


def run_one(algorithm: str, p: GroundTruthPoset, w: int, k: int | None = None, seed: int | None = None) -> BenchRecord:
    """Run one algorithm on ``p``.

    The algorithm's random stream is derived from ``seed`` separately from
    the instance generator's, so the two are never correlated.
    """
    runner = RUNNERS[algorithm]
    algo_seed = None if seed is None else np.random.SeedSequence([seed, 1])
    start = time.perf_counter()
    out = runner(p, w, k or 1, algo_seed)
    elapsed = (time.perf_counter() - start) * 1000
    return BenchRecord(
        algorithm, p.n, w, k if algorithm in USES_K else None, seed,
        out.queries, out.bound, out.within, elapsed, out.correct,
    )


def _trial(args) -> list[BenchRecord]:
    cfg, trial = args
    seed = cfg.seed + trial
    p = MODELS[cfg.model](cfg.n, cfg.w, seed=seed)
    return [run_one(a, p, cfg.w, cfg.k, seed) for a in cfg.algorithms]


def run_bench(cfg: BenchConfig) -> list[BenchRecord]:
    """All trials; rows ordered by trial index, then algorithm, however jobs finish."""
    tasks = [(cfg, t) for t in range(cfg.trials)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_trial, tasks))
    else:
        results = [_trial(t) for t in tasks]
    return [r for rows in results for r in rows]


def write_csv(records, handle=None) -> str:
    buf = io.StringIO() if handle is None else handle
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue() if handle is None else ""


def summarize(records) -> dict[str, dict]:
    out: dict[str, dict] = {}
    for name in dict.fromkeys(r.algorithm for r in records):
        qs = np.array([r.queries for r in records if r.algorithm == name], dtype=float)
        mine = [r for r in records if r.algorithm == name]
        out[name] = {
            "trials": len(qs),
            "mean": float(qs.mean()),
            "std": float(qs.std(ddof=1)) if len(qs) > 1 else 0.0,
            "max": int(qs.max()),
            "bound": mine[0].bound,
            "all_within": all(r.within_bound for r in mine),
            "all_correct": all(r.correct for r in mine),
        }
    return out


def record_dict(r: BenchRecord) -> dict:
    return asdict(r)

