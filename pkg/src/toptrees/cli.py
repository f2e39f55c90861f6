"""Command-line front end: generate, compress, verify, compare, bound-check.

Exit codes: 0 success, 1 invariant/verification failure, 2 usage or input
error.  All commands are deterministic for fixed inputs and flags.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction

from .builder import (BuildConfig, IterationLimitError, NoEdgesError,
                      build_top_tree, toptree_height)
from .counting import bound_check
from .dag import (ExpansionLimitError, InconsistentMergeError, TopDagFormatError,
                  count_distinct_clusters, dag_stats, decompress, expand,
                  minimize, read_tdag, toptrees_identical, write_tdag)
from .generators import (FamilyParams, gen_family_tree_with_paths,
                         gen_full_ternary, gen_gadget, gen_path,
                         gen_random_tree, kth_word, alphabet)
from .instrument import distinct_clusters_covering
from .reporting import CompressReport, ComparisonRow, write_comparison_csv
from .tree import (TreeSyntaxError, read_bp, tree_stats, trees_equal, write_bp)


def _parse_alpha(text: str) -> Fraction:
    try:
        alpha = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"alpha must be a P/Q rational, got {text!r}") from None
    if alpha <= 1:
        raise ValueError("alpha must be greater than 1")
    return alpha


def _print_stats(stats) -> None:
    print(f"n={stats.n} edges={stats.edges} sigma={stats.sigma} "
          f"depth={stats.depth} info_bound={stats.info_bound:.3f}")


def _generate(args) -> int:
    family = args.family
    if family == "path":
        word = kth_word(args.word_index, 8 ** args.k, args.sigma)
        tree = gen_path(word)
    elif family == "ternary":
        tree = gen_full_ternary(args.k, alphabet(max(args.sigma, 1))[0])
    elif family == "gadget":
        first = alphabet(args.sigma)[0]
        word = kth_word(args.word_index, 8 ** args.k, args.sigma)
        tree = gen_gadget(args.k, word, first, first)
    elif family == "tk":
        params = FamilyParams(k=args.k, sigma=args.sigma, m=args.m)
        tree, _ = gen_family_tree_with_paths(params)
    elif family == "random":
        if args.n is None:
            raise ValueError("--n is required for the random family")
        tree = gen_random_tree(args.n, args.sigma, args.seed)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown family {family!r}")
    write_bp(args.out, tree)
    _print_stats(tree_stats(tree, declared_sigma=args.sigma))
    return 0


def _compress(args) -> int:
    tree = read_bp(args.input)
    if tree.n < 2:
        raise NoEdgesError("input tree has a single node; nothing to compress")
    alpha = _parse_alpha(args.alpha)
    cfg = BuildConfig(algo=args.algo, alpha=alpha)
    started = time.perf_counter()
    toptree, trace = build_top_tree(tree, cfg)
    dag = minimize(toptree)
    wall = time.perf_counter() - started
    write_tdag(args.out, dag)
    stats = tree_stats(tree, declared_sigma=args.sigma)
    dstats = dag_stats(dag, stats)
    report = CompressReport(input=str(args.input), algo=args.algo,
                            alpha=f"{alpha.numerator}/{alpha.denominator}",
                            stats=stats, trace=trace, dag=dstats,
                            wall_time_s=wall)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report.to_json_dict(), fh, indent=2)
            fh.write("\n")
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump([row.to_json_dict() for row in trace], fh, indent=2)
            fh.write("\n")
    print(f"dag_nodes={dag.dag_nodes} dag_edges={dag.dag_edges} "
          f"toptree_nodes={dstats.toptree_nodes} iterations={len(trace)} "
          f"wall_time_s={wall:.4f}")
    return 0


class _CheckList:
    def __init__(self):
        self.failed = []

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        tag = "ok" if ok else "FAIL"
        suffix = f" ({detail})" if detail and not ok else ""
        print(f"{tag:4s} {name}{suffix}")
        if not ok:
            self.failed.append(name)


def _ceil_ratio_log(num: int, den: int, n: int) -> int:
    """Smallest i >= 0 with (num/den)**i >= n, by exact arithmetic."""
    i, hi, lo = 0, 1, 1
    while hi < n * lo:
        hi *= num
        lo *= den
        i += 1
    return i


def _verify_tree(args) -> int:
    tree = read_bp(args.input)
    alpha = _parse_alpha(args.alpha)
    cfg = BuildConfig(algo=args.algo, alpha=alpha, audit=True)
    checks = _CheckList()
    try:
        toptree, trace = build_top_tree(tree, cfg)
    except NoEdgesError as exc:
        print(f"FAIL build ({exc})", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"FAIL per-iteration partition audit ({exc})", file=sys.stderr)
        return 1
    checks.check("per-iteration partition audit", True)
    dag = minimize(toptree)
    expanded = expand(dag)
    restored = decompress(expanded)
    checks.check("roundtrip equality", trees_equal(restored, tree))
    checks.check("expand(minimize) identity", toptrees_identical(expanded, toptree))
    checks.check("distinct-cluster oracle agrees",
                 count_distinct_clusters(toptree) == dag.dag_nodes)
    checks.check("top tree height within iteration count",
                 toptree_height(toptree) <= len(trace))
    if args.algo == "modified":
        num, den = alpha.numerator, alpha.denominator
        cap_ok = shrink_ok = True
        for row in trace:
            cutoff = (num ** row.t) // (den ** row.t)
            if any(sa > cutoff or sb > cutoff for sa, sb in row.applied_sizes):
                cap_ok = False
            if row.clusters_after > (7 * row.m + 7) // 8 + row.q:
                shrink_ok = False
        checks.check("size cap respected in every iteration", cap_ok)
        checks.check("shrinkage: clusters_after <= ceil(7m/8)+q", shrink_ok)
        if alpha == Fraction(10, 9):
            bound_ok = all(
                row.clusters_after * 10 ** (row.t + 1)
                <= 113 * tree.n * 9 ** (row.t + 1)
                for row in trace)
            checks.check("cluster count within 113*n/alpha^(t+1)", bound_ok)
    if checks.failed:
        print(f"verification failed: {', '.join(checks.failed)}", file=sys.stderr)
        return 1
    return 0


def _verify_tdag(args) -> int:
    try:
        dag = read_tdag(args.input)
        expanded = expand(dag)
        restored = decompress(expanded)
    except (TopDagFormatError, InconsistentMergeError, ExpansionLimitError) as exc:
        print(f"FAIL expansion path ({exc})", file=sys.stderr)
        return 1
    print(f"ok   expansion path (tree with {restored.n} nodes)")
    if args.expect:
        expected = read_bp(args.expect)
        ok = trees_equal(restored, expected)
        print(f"{'ok' if ok else 'FAIL':4s} matches {args.expect}")
        if not ok:
            return 1
    return 0


def _verify(args) -> int:
    if str(args.input).endswith(".tdag"):
        return _verify_tdag(args)
    return _verify_tree(args)


def _compare(args) -> int:
    alpha = _parse_alpha(args.alpha)
    rows = []
    details = []
    for k in args.k:
        params = FamilyParams(k=k, sigma=args.sigma, m=args.m)
        tree, paths = gen_family_tree_with_paths(params)
        stats = tree_stats(tree, declared_sigma=args.sigma)
        tt_orig, _ = build_top_tree(tree, BuildConfig(algo="original"))
        dag_orig = minimize(tt_orig)
        tt_mod, _ = build_top_tree(tree, BuildConfig(algo="modified", alpha=alpha))
        dag_mod = minimize(tt_mod)
        total, per_gadget = distinct_clusters_covering(
            tt_orig, [set(p) for p in paths])
        orig_stats = dag_stats(dag_orig, stats)
        mod_stats = dag_stats(dag_mod, stats)
        rows.append(ComparisonRow(
            k=k, sigma=args.sigma, m=args.m, N=stats.n,
            dag_original=dag_orig.dag_nodes, dag_modified=dag_mod.dag_nodes,
            ratio=dag_orig.dag_nodes / dag_mod.dag_nodes,
            hsr_ratio_original=orig_stats.ratio_hsr,
            info_ratio_modified=mod_stats.ratio_info))
        details.append({"k": k, "distinct_path_clusters": total,
                        "per_gadget": per_gadget})
        print(f"k={k} N={stats.n} dag_original={dag_orig.dag_nodes} "
              f"dag_modified={dag_mod.dag_nodes} "
              f"ratio={rows[-1].ratio:.3f} "
              f"distinct_path_clusters={total} "
              f"per_gadget_min={min(per_gadget)} per_gadget_max={max(per_gadget)}")
    write_comparison_csv(args.out, rows)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(details, fh, indent=2)
            fh.write("\n")
    return 0


def _bound_check(args) -> int:
    rows = bound_check(args.x_max, args.sigma)
    ok = True
    for row in rows:
        status = "ok" if row.ok else "FAIL"
        print(f"{status:4s} size<={row.size}: distinct={row.cumulative} "
              f"(exactly {row.count} of size {row.size}) bound={row.bound}")
        ok = ok and row.ok
    return 0 if ok else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toptrees",
        description="Top-tree compression toolkit: generators, builders, "
                    "top-DAG minimization and bound checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a tree and write a .bp file")
    gen.add_argument("--family", required=True,
                     choices=["path", "ternary", "gadget", "tk", "random"])
    gen.add_argument("--k", type=int, default=1, help="gadget order / height")
    gen.add_argument("--sigma", type=int, default=2, help="alphabet size")
    gen.add_argument("--m", type=int, default=1, help="gadget count (tk)")
    gen.add_argument("--n", type=int, default=None, help="node count (random)")
    gen.add_argument("--seed", type=int, default=0, help="seed (random)")
    gen.add_argument("--word-index", type=int, default=0,
                     help="lexicographic word index for path labels")
    gen.add_argument("-o", "--out", required=True, help="output .bp path")
    gen.set_defaults(func=_generate)

    comp = sub.add_parser("compress", help="build the top DAG of a .bp tree")
    comp.add_argument("input", help="input .bp file")
    comp.add_argument("--algo", choices=["original", "modified"],
                      default="original")
    comp.add_argument("--alpha", default="10/9", help="size-cap base as P/Q")
    comp.add_argument("--sigma", type=int, default=None,
                      help="declared alphabet size for the statistics")
    comp.add_argument("-o", "--out", required=True, help="output .tdag path")
    comp.add_argument("--report", default=None, help="write a JSON report")
    comp.add_argument("--trace", default=None, help="write the iteration trace JSON")
    comp.set_defaults(func=_compress)

    ver = sub.add_parser("verify",
                         help="roundtrip and invariant audit of a .bp tree, "
                              "or expansion check of a .tdag")
    ver.add_argument("input", help="input .bp or .tdag file")
    ver.add_argument("--algo", choices=["original", "modified"],
                     default="original")
    ver.add_argument("--alpha", default="10/9")
    ver.add_argument("--expect", default=None,
                     help="original .bp to compare a .tdag expansion against")
    ver.set_defaults(func=_verify)

    cmp_ = sub.add_parser("compare",
                          help="original vs modified top-DAG sizes over the "
                               "gadget family")
    cmp_.add_argument("--k", type=int, nargs="+", required=True)
    cmp_.add_argument("--sigma", type=int, default=2)
    cmp_.add_argument("--m", type=int, default=64)
    cmp_.add_argument("--alpha", default="10/9")
    cmp_.add_argument("-o", "--out", required=True, help="output CSV path")
    cmp_.add_argument("--report", default=None,
                      help="write per-gadget path-cluster counts as JSON")
    cmp_.set_defaults(func=_compare)

    bc = sub.add_parser("bound-check",
                        help="exhaustively count small labeled cluster trees "
                             "against the closed-form bound")
    bc.add_argument("--x-max", type=int, default=3)
    bc.add_argument("--sigma", type=int, default=2)
    bc.set_defaults(func=_bound_check)
    return parser


def main(argv=None) -> int:
    import gc
    gc.disable()  # builds allocate millions of small nodes and drop no cycles
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TreeSyntaxError, NoEdgesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IterationLimitError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
