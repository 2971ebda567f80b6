"""Sweep n and w for a set of algorithms and report mean queries against each budget.

    python scripts/bench_sweep.py --algo mergesort bininsert kselect-det --n 64 256 --w 2 4 8
"""

import argparse
import sys

from posetkit.bench import RUNNERS, BenchConfig, run_bench, summarize, write_csv

# budgets on expected queries: compare the mean, not each run
EXPECTED = {"minimals-rand", "kselect-rand", "ternary"}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--algo", nargs="+", default=["mergesort", "bininsert", "minimals-det"], choices=list(RUNNERS))
    ap.add_argument("--n", type=int, nargs="+", default=[64, 256])
    ap.add_argument("--w", type=int, nargs="+", default=[2, 4, 8])
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--model", choices=("chains", "width"), default="chains")
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--csv", help="write every row here")
    args = ap.parse_args(argv)

    records = []
    print(f"{'algorithm':<14} {'n':>5} {'w':>3} {'mean':>10} {'max':>8} {'bound':>12} {'ratio':>6} ok")
    for n in args.n:
        for w in args.w:
            if w > n:
                continue
            cfg = BenchConfig(tuple(args.algo), n, w, args.k, args.model, args.trials, args.seed, args.jobs)
            rows = run_bench(cfg)
            records.extend(rows)
            for name, s in summarize(rows).items():
                ratio = s["mean"] / s["bound"] if s["bound"] else float("nan")
                within = s["mean"] <= s["bound"] if name in EXPECTED else s["all_within"]
                ok = s["all_correct"] and within
                print(f"{name:<14} {n:>5} {w:>3} {s['mean']:>10.1f} {s['max']:>8} {s['bound']:>12.1f} {ratio:>6.3f} {ok}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            write_csv(records, fh)
    return 0 if all(r.correct for r in records) else 1


if __name__ == "__main__":
    sys.exit(main())
