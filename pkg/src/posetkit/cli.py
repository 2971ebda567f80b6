"""Command-line front end.

Exit status: 0 on success, 1 when a result fails verification (wrong answer
or broken query budget), 2 on usage errors including unreadable input.
All randomness comes from ``--seed`` through numpy's PCG64 generator.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import bounds
from .adversary import MinAdversary, finalize_witness, lower_bound_min
from .bench import RUNNERS, BenchConfig, run_bench, run_one, summarize, write_csv
from .core import (
    GroundTruthPoset,
    dump_poset,
    dump_relation,
    generate_chain_union,
    generate_transitive_relation,
    generate_width_bounded,
    heights_bruteforce,
    is_linear_extension,
    kselect_bruteforce,
    load_poset,
    load_relation,
    width,
)
from .errors import ParseError, PosetError, CycleError
from .linext import build_ternary_tree, heights_from_extension, linear_extension
from .oracle import PosetOracle, QueryCounter
from .selection import kselect_det, kselect_rand, minimals_det, minimals_rand

SORT_ALGOS = ("bininsert", "entropy", "mergesort", "unknown-width", "transitive")


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _load(path: str) -> GroundTruthPoset:
    try:
        return load_poset(_read(path))
    except (ParseError, CycleError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _width_arg(args, p: GroundTruthPoset) -> int:
    return args.width if args.width is not None else max(width(p), 1)


def _report(args, records) -> None:
    if getattr(args, "report", None):
        _write(args.report, write_csv(records))


# --- subcommands -----------------------------------------------------------


def cmd_gen(args) -> int:
    if args.model == "transitive":
        rel = generate_transitive_relation(args.n, args.w, args.mutual, seed=args.seed)
        _write(args.out, dump_relation(rel))
        return 0
    gen = generate_chain_union if args.model == "chains" else generate_width_bounded
    p = gen(args.n, args.w, seed=args.seed)
    _write(args.out, dump_poset(p, comment=f"model={args.model} n={args.n} w={args.w} seed={args.seed}"))
    return 0


def cmd_sort(args) -> int:
    if args.algo == "transitive":
        return _sort_transitive(args)
    p = _load(args.input)
    w = _width_arg(args, p)
    rec = run_one(args.algo, p, w, seed=args.seed)
    print(f"{args.algo}: n={p.n} w={w} queries={rec.queries} bound={rec.bound:.6f} "
          f"within_bound={rec.within_bound} correct={rec.correct}")
    _report(args, [rec])
    if args.emit_index:
        from .sorting import poset_mergesort

        _write(args.emit_index, poset_mergesort(p.n, PosetOracle(p), w).dump())
    return 0 if rec.correct and rec.within_bound else 1


def _sort_transitive(args) -> int:
    from .bench import BenchRecord
    from .oracle import TransitiveOracle, TransitiveOracleAdapter
    from .sorting import TransitiveStats, sort_transitive

    try:
        rel = load_relation(_read(args.input))
    except ParseError as exc:
        raise UsageError(f"{args.input}: {exc}") from None
    n = rel.shape[0]
    if args.width is None:
        raise UsageError("--width is required for --algo transitive")
    w = args.width
    inner = TransitiveOracle(rel)
    stats = TransitiveStats()
    table = sort_transitive(n, TransitiveOracleAdapter(inner), w, stats=stats)
    correct = bool(np.array_equal(table, rel))
    within = stats.phase2_queries <= 2 * n * w
    bound = bounds.mergesort_total_bound(n, w) + 2 * n * w
    print(f"transitive: n={n} w={w} phase1={stats.phase1_queries} phase2={stats.phase2_queries} "
          f"phase2_bound={2 * n * w} correct={correct}")
    _report(args, [BenchRecord("transitive", n, w, None, args.seed, inner.count, bound, within, 0.0, correct)])
    return 0 if correct and within else 1


def cmd_select(args) -> int:
    p = _load(args.input)
    w = _width_arg(args, p)
    truth = kselect_bruteforce(p, args.k)
    name = f"kselect-{args.algo}"
    records = [run_one(name, p, w, args.k, seed=args.seed + t) for t in range(args.trials)]
    o = QueryCounter(PosetOracle(p))
    if args.algo == "det":
        got = kselect_det(p.n, o, w, args.k)
    else:
        got = kselect_rand(p.n, o, w, args.k, args.seed)
    print(" ".join(map(str, sorted(got))))
    qs = np.array([r.queries for r in records], dtype=float)
    print(f"# {name}: trials={len(qs)} mean_queries={qs.mean():.3f} bound={records[0].bound:.6f}", file=sys.stderr)
    _report(args, records)
    ok = got == truth and all(r.correct for r in records)
    if args.algo == "det":
        ok = ok and all(r.within_bound for r in records)
    return 0 if ok else 1


def cmd_minimals(args) -> int:
    p = _load(args.input)
    w = _width_arg(args, p)
    o = QueryCounter(PosetOracle(p))
    got = minimals_det(p.n, o, w) if args.algo == "det" else minimals_rand(p.n, o, w, args.seed)
    print(" ".join(map(str, sorted(got))))
    bound = w * p.n if args.algo == "det" else bounds.minimals_rand_expectation(p.n, w)
    print(f"# minimals-{args.algo}: queries={o.count} bound={bound:.6f}", file=sys.stderr)
    ok = got == kselect_bruteforce(p, 1) and (args.algo == "rand" or o.count <= bound)
    return 0 if ok else 1


def cmd_linext(args) -> int:
    p = _load(args.input)
    o = QueryCounter(PosetOracle(p))
    ext = linear_extension(build_ternary_tree(p.n, o, args.seed))
    _write(args.out, "".join(f"{x}\n" for x in ext))
    print(f"# ternary tree weight={o.count}", file=sys.stderr)
    return 0 if is_linear_extension(p, ext) else 1


def cmd_heights(args) -> int:
    p = _load(args.input)
    w = _width_arg(args, p)
    ext = linear_extension(build_ternary_tree(p.n, PosetOracle(p), args.seed))
    o = QueryCounter(PosetOracle(p))
    h = heights_from_extension(ext, o, w)
    _write(args.out, "".join(f"{x} {h[x]}\n" for x in sorted(h)))
    print(f"# heights queries={o.count}", file=sys.stderr)
    return 0 if h == heights_bruteforce(p) else 1


def cmd_adversary(args) -> int:
    adv = MinAdversary(args.n, args.w, mode=args.mode, seed=args.seed)
    if args.algo == "det":
        got = minimals_det(args.n, adv, args.w)
    else:
        got = minimals_rand(args.n, adv, args.w, args.seed)
    witness = finalize_witness(adv)
    bound = lower_bound_min(args.n, args.w)
    correct = got == kselect_bruteforce(witness, 1)
    passed = correct and adv.count >= math.ceil(bound)
    print(f"queries={adv.count} lower_bound={float(bound):.6f} correct={correct} "
          f"{'PASS' if passed else 'FAIL'}")
    if args.witness:
        _write(args.witness, dump_poset(witness, comment="adversary witness"))
    return 0 if passed else 1


def cmd_bench(args) -> int:
    unknown = [a for a in args.algo if a not in RUNNERS]
    if unknown:
        raise UsageError(f"unknown algorithm(s): {', '.join(unknown)}")
    cfg = BenchConfig(tuple(args.algo), args.n, args.w, args.k, args.model, args.trials, args.seed, args.jobs)
    records = run_bench(cfg)
    text = write_csv(records)
    _write(args.out, text)
    for name, s in summarize(records).items():
        print(f"# {name}: mean={s['mean']:.3f} std={s['std']:.3f} max={s['max']} "
              f"bound={s['bound']:.6f} all_correct={s['all_correct']}", file=sys.stderr)
    return 0 if all(r.correct for r in records) else 1


def cmd_verify(args) -> int:
    p = _load(args.input)
    w = _width_arg(args, p)
    names = list(RUNNERS) if args.all else (args.algo or ["mergesort"])
    failed = False
    for name in names:
        if name == "entropy" and p.n > 8:
            print(f"{name}: skipped (n={p.n} above the exhaustive cap)")
            continue
        rec = run_one(name, p, w, args.k, seed=args.seed)
        hard = name not in ("minimals-rand", "kselect-rand", "ternary", "heights")
        ok = rec.correct and (rec.within_bound or not hard)
        failed |= not ok
        print(f"{name}: queries={rec.queries} bound={rec.bound:.6f} correct={rec.correct} "
              f"within_bound={rec.within_bound} {'ok' if ok else 'FAIL'}")
    return 1 if failed else 0


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="posetkit", description="Sorting and selection in width-bounded posets.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--w", type=int, required=True)
    g.add_argument("--model", choices=("chains", "width", "transitive"), default="chains")
    g.add_argument("--mutual", type=int, default=None, help="mutual pairs for --model transitive")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    def instance(sp, need_width=True):
        sp.add_argument("--input", required=True)
        if need_width:
            sp.add_argument("--width", type=int, default=None, help="width bound (default: true width)")
        sp.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("sort", help="sort an instance and check the result")
    instance(s)
    s.add_argument("--algo", choices=SORT_ALGOS, default="mergesort")
    s.add_argument("--report")
    s.add_argument("--emit-index", dest="emit_index")
    s.set_defaults(func=cmd_sort)

    sel = sub.add_parser("select", help="bottom-k levels")
    instance(sel)
    sel.add_argument("--k", type=int, required=True)
    sel.add_argument("--algo", choices=("det", "rand"), default="det")
    sel.add_argument("--trials", type=int, default=1)
    sel.add_argument("--report")
    sel.set_defaults(func=cmd_select)

    m = sub.add_parser("minimals", help="minimal elements")
    instance(m)
    m.add_argument("--algo", choices=("det", "rand"), default="det")
    m.set_defaults(func=cmd_minimals)

    le = sub.add_parser("linext", help="a linear extension, one id per line")
    instance(le, need_width=False)
    le.add_argument("--out")
    le.set_defaults(func=cmd_linext)

    h = sub.add_parser("heights", help="heights of all elements")
    instance(h)
    h.add_argument("--out")
    h.set_defaults(func=cmd_heights)

    a = sub.add_parser("adversary", help="run a minimal-elements algorithm against the adversary")
    a.add_argument("--mode", choices=("min", "ksel"), default="min")
    a.add_argument("--algo", choices=("det", "rand"), default="det")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--w", type=int, required=True)
    a.add_argument("--seed", type=int, default=None)
    a.add_argument("--witness")
    a.set_defaults(func=cmd_adversary)

    b = sub.add_parser("bench", help="query counts over many seeded instances, as CSV")
    b.add_argument("--algo", nargs="+", default=["mergesort"], help=f"any of: {', '.join(RUNNERS)}")
    b.add_argument("--n", type=int, default=64)
    b.add_argument("--w", type=int, default=4)
    b.add_argument("--k", type=int, default=1)
    b.add_argument("--model", choices=("chains", "width"), default="chains")
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("verify", help="run algorithms and cross-check against brute force")
    instance(v)
    v.add_argument("--all", action="store_true")
    v.add_argument("--algo", nargs="+", choices=list(RUNNERS))
    v.add_argument("--k", type=int, default=2)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"posetkit: error: {exc}", file=sys.stderr)
        return 2
    except PosetError as exc:
        print(f"posetkit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
