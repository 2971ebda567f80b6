"""How far above the adversarial lower bound do the minimal-element algorithms land?

    python scripts/adversary_gap.py --n 50 100 200 --w 1 2 3 5
"""

import argparse
import math
import sys

from posetkit.adversary import MinAdversary, finalize_witness, lower_bound_min
from posetkit.core import kselect_bruteforce
from posetkit.selection import minimals_det, minimals_rand


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[50, 100, 200])
    ap.add_argument("--w", type=int, nargs="+", default=[1, 2, 3, 5])
    ap.add_argument("--seeds", type=int, default=5, help="seeds for the randomized algorithm")
    args = ap.parse_args(argv)

    failures = 0
    print(f"{'n':>5} {'w':>3} {'bound':>9} {'det':>7} {'rand(mean)':>11} {'upper wn':>9}")
    for n in args.n:
        for w in args.w:
            if w > n:
                continue
            need = math.ceil(lower_bound_min(n, w))
            counts = {}
            for algo in ("det", "rand"):
                seen = []
                for s in range(1 if algo == "det" else args.seeds):
                    adv = MinAdversary(n, w)
                    got = minimals_det(n, adv, w) if algo == "det" else minimals_rand(n, adv, w, seed=s)
                    witness = finalize_witness(adv)
                    failures += got != kselect_bruteforce(witness, 1) or adv.count < need
                    seen.append(adv.count)
                counts[algo] = sum(seen) / len(seen)
            print(f"{n:>5} {w:>3} {need:>9} {counts['det']:>7.0f} {counts['rand']:>11.1f} {w * n:>9}")
    if failures:
        print(f"{failures} runs beat the bound or returned a wrong answer", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
