"""Compare EntropySort, mergesort and binary insertion on whole small families.

Every width-<=w poset on m elements is sorted by each algorithm; the script
prints average and worst queries next to the information-theoretic floor
log2 N_w(m).

    python scripts/entropy_vs_mergesort.py --m 4 5 6 --w 2 3
"""

import argparse
import math
import sys

import numpy as np

from posetkit.counting import poset_family, poset_from_mask
from posetkit.oracle import PosetOracle, QueryCounter
from posetkit.sorting import bin_insertion_sort, entropy_sort, poset_mergesort

SORTERS = {"entropy": entropy_sort, "mergesort": poset_mergesort, "bininsert": bin_insertion_sort}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, nargs="+", default=[4, 5, 6])
    ap.add_argument("--w", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--sample", type=int, default=200, help="max posets per (m, w); 0 means all")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    print(f"{'m':>3} {'w':>3} {'N':>8} {'log2 N':>7}  " + "  ".join(f"{s:>16}" for s in SORTERS))
    for m in args.m:
        for w in args.w:
            family = poset_family(m, w)
            picks = np.arange(len(family))
            if args.sample and len(family) > args.sample:
                picks = rng.choice(len(family), size=args.sample, replace=False)
            cells = []
            for fn in SORTERS.values():
                counts = []
                for i in picks:
                    p = poset_from_mask(int(family[i]), m)
                    o = QueryCounter(PosetOracle(p))
                    fn(m, o, w)
                    counts.append(o.count)
                cells.append(f"{np.mean(counts):>8.2f} / {max(counts):>5}")
            print(f"{m:>3} {w:>3} {len(family):>8} {math.log2(len(family)):>7.2f}  " + "  ".join(cells))
    return 0


if __name__ == "__main__":
    sys.exit(main())
