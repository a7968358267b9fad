"""Command-line tool: checks, DOT export, benchmarks, self-test.

Exit codes: 0 for a positive verdict (tautology / satisfiable /
equivalent, or a passing self-test), 1 for the negative verdict or a
failed self-test, 2 for usage, parse or resource-limit errors.

``bench`` writes comma-separated rows to stdout with the header::

    family,size,backend,kernel,wall_s,peak_nodes,intern_hits,intern_misses,memo_hits,memo_misses,models,verdict

``peak_nodes`` is the decision-node count of the state after compiling
(pools only grow, so this is the peak), and ``models`` counts satisfying
assignments over the family's full variable set.  When a size ran on both
backends, a ``#`` comment line reports the pure/interned wall-time ratio;
consumers should skip lines starting with ``#``.
"""
from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass
from typing import Callable, Optional

from . import frontend, interned, oracle, pure
from .core import (
    LEAF_FALSE,
    LEAF_TRUE,
    BddError,
    Formula,
    Leaf,
    formula_max_var,
)

QUEENS_SIZE_CAP = 8
PIGEONHOLE_SIZE_CAP = 7


@dataclass
class RunReport:
    """Counters and verdict for one command execution on one backend."""

    command: str
    backend: str
    kernel: str
    verdict: str
    result_nodes: int
    state_nodes: int
    intern_hits: int
    intern_misses: int
    memo_hits: int
    memo_misses: int
    wall_s: float

    def to_line(self) -> str:
        return (
            f"command={self.command} backend={self.backend} kernel={self.kernel} "
            f"verdict={self.verdict} result_nodes={self.result_nodes} "
            f"state_nodes={self.state_nodes} "
            f"intern_hits={self.intern_hits} intern_misses={self.intern_misses} "
            f"memo_hits={self.memo_hits} memo_misses={self.memo_misses} "
            f"wall_s={self.wall_s:.6f}"
        )


def _memo_totals(stats: dict[str, int]) -> tuple[int, int]:
    hits = sum(v for k, v in stats.items() if k.endswith("_hits") and k != "intern_hits")
    misses = sum(
        v for k, v in stats.items() if k.endswith("_misses") and k != "intern_misses"
    )
    return hits, misses


# ---------------------------------------------------------------------------
# Model counting (weighted path counting over the variable span 1..n)


def count_models(root, n: int, store: Optional[pure.Store] = None) -> int:
    """Satisfying assignments of a compiled BDD over variables ``x1..xn``.

    Standard path counting: a branch that skips ``g`` variable levels
    contributes its count times ``2**g``.  Verified against brute-force
    enumeration in the test suite.
    """
    if store is not None:

        def fields(ref):
            # (key, terminal value, var, low, high)
            if isinstance(ref, Leaf):
                return ref, ref is LEAF_TRUE, None, None, None
            node = store.graph[ref]
            return ref, None, node.var, node.low, node.high

    else:

        def fields(h):
            if h.terminal >= 0:
                return h.uid, h.terminal == 1, None, None, None
            return h.uid, None, h.var, h.low, h.high

    counts: dict = {}

    def level(x) -> int:
        var = fields(x)[2]
        return n + 1 if var is None else var

    def walk(x) -> int:
        key, value, var, low, high = fields(x)
        hit = counts.get(key)
        if hit is not None:
            return hit
        if var is None:
            result = 1 if value else 0
        else:
            if var > n:
                raise ValueError(f"node variable x{var} above the declared span {n}")
            result = (walk(low) << (level(low) - var - 1)) + (
                walk(high) << (level(high) - var - 1)
            )
        counts[key] = result
        return result

    return walk(root) << (level(root) - 1)


# ---------------------------------------------------------------------------
# check


def _verdict_and_exit(kind: str, positive: bool) -> tuple[str, int]:
    words = {
        "taut": ("taut", "not-taut"),
        "sat": ("sat", "unsat"),
        "equiv": ("equiv", "not-equiv"),
    }[kind]
    return (words[0], 0) if positive else (words[1], 1)


def cmd_check(args) -> int:
    kind = args.kind
    if kind == "equiv" and len(args.files) != 2:
        print("equiv needs exactly two formula files", file=sys.stderr)
        return 2
    if kind != "equiv" and len(args.files) != 1:
        print(f"{kind} needs exactly one formula file", file=sys.stderr)
        return 2
    try:
        formulas = [frontend.parse_file(path) for path in args.files]
    except (OSError, BddError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    backends = ["pure", "interned"] if args.backend == "both" else [args.backend]
    exit_codes = []
    for backend in backends:
        try:
            report, positive = _check_one(kind, formulas, backend, args.fuel)
        except BddError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(report.to_line())
        exit_codes.append(0 if positive else 1)
    if len(set(exit_codes)) > 1:
        print("error: backends disagree on the verdict", file=sys.stderr)
        return 2
    return exit_codes[0]


def _check_one(kind, formulas, backend, fuel) -> tuple[RunReport, bool]:
    start = time.perf_counter()
    if backend == "pure":
        st = pure.empty_store()
        refs = []
        for f in formulas:
            ref, st = frontend.compile_pure(f, st, fuel)
            refs.append(ref)
        stats = pure.store_stats(st)
        state_nodes = pure.node_count(st)
        result_nodes = pure.size(st, refs[0])
        if kind == "taut":
            positive = refs[0] is LEAF_TRUE
        elif kind == "sat":
            positive = refs[0] is not LEAF_FALSE
        else:
            positive = pure.eq(refs[0], refs[1])
        kernel = "python"
    else:
        m = interned.new_manager()
        handles = [frontend.compile_interned(f, m) for f in formulas]
        stats = m.stats()
        state_nodes = m.pool_size() - 2
        result_nodes = interned.bdd_size(handles[0])
        if kind == "taut":
            positive = handles[0].uid == m.true.uid
        elif kind == "sat":
            positive = handles[0].uid != m.false.uid
        else:
            positive = interned.structural_eq(handles[0], handles[1])
        kernel = interned.kernel_name()
    wall = time.perf_counter() - start
    memo_hits, memo_misses = _memo_totals(stats)
    verdict, _ = _verdict_and_exit(kind, positive)
    report = RunReport(
        command=f"check:{kind}",
        backend=backend,
        kernel=kernel,
        verdict=verdict,
        result_nodes=result_nodes,
        state_nodes=state_nodes,
        intern_hits=stats["intern_hits"],
        intern_misses=stats["intern_misses"],
        memo_hits=memo_hits,
        memo_misses=memo_misses,
        wall_s=wall,
    )
    return report, positive


# ---------------------------------------------------------------------------
# dot


def cmd_dot(args) -> int:
    try:
        f = frontend.parse_file(args.file)
    except (OSError, BddError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    m = interned.new_manager()
    if args.backend == "pure":
        st = pure.empty_store()
        ref, st = frontend.compile_pure(f, st, args.fuel)
        root = interned.import_pure(m, st, ref)
    else:
        root = frontend.compile_interned(f, m)
    text = interned.to_dot(root)
    out = args.dot_out or args.out
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# bench

BENCH_HEADER = (
    "family,size,backend,kernel,wall_s,peak_nodes,intern_hits,intern_misses,"
    "memo_hits,memo_misses,models,verdict"
)


def _parse_sizes(text: str) -> list[int]:
    sizes = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            sizes.extend(range(int(lo), int(hi) + 1))
        elif part:
            sizes.append(int(part))
    if not sizes:
        raise ValueError("empty size list")
    return sizes


def _bench_formula(family: str, size: int) -> tuple[Formula, int]:
    if family == "queens":
        return frontend.queens_formula(size), size * size
    return frontend.pigeonhole_formula(size), frontend.pigeonhole_vars(size)


def _bench_row(family, size, backend, kernel, formula, n_vars) -> tuple[str, float]:
    start = time.perf_counter()
    if backend == "pure":
        st = pure.empty_store()
        ref, st = frontend.compile_pure(formula, st)
        wall = time.perf_counter() - start
        stats = pure.store_stats(st)
        peak = pure.node_count(st)
        models = count_models(ref, n_vars, store=st)
    else:
        m = interned.new_manager(kernel)
        root = frontend.compile_interned(formula, m)
        wall = time.perf_counter() - start
        stats = m.stats()
        peak = m.pool_size() - 2
        models = count_models(root, n_vars)
    memo_hits, memo_misses = _memo_totals(stats)
    verdict = "sat" if models else "unsat"
    row = (
        f"{family},{size},{backend},{kernel},{wall:.4f},{peak},"
        f"{stats['intern_hits']},{stats['intern_misses']},"
        f"{memo_hits},{memo_misses},{models},{verdict}"
    )
    return row, wall


def cmd_bench(args) -> int:
    cap = args.size_cap
    if cap is None:
        cap = QUEENS_SIZE_CAP if args.family == "queens" else PIGEONHOLE_SIZE_CAP
    try:
        sizes = _parse_sizes(args.sizes)
    except ValueError as exc:
        print(f"error: bad size list: {exc}", file=sys.stderr)
        return 2
    if any(s < 1 or s > cap for s in sizes):
        print(
            f"error: sizes for {args.family} must be within 1..{cap}",
            file=sys.stderr,
        )
        return 2
    backends = ["pure", "interned"] if args.backend == "both" else [args.backend]
    if args.kernel == "both":
        kernels = interned.available_kernels()
    elif args.kernel == "auto":
        kernels = [interned.kernel_name()]
    else:
        kernels = [args.kernel]
        if args.kernel == "compiled" and not interned.HAVE_SPEEDUPS:
            print("error: compiled kernel is not available", file=sys.stderr)
            return 2

    print(BENCH_HEADER)
    for size in sizes:
        formula, n_vars = _bench_formula(args.family, size)
        pure_wall = None
        interned_walls = []
        for backend in backends:
            if backend == "pure":
                row, pure_wall = _bench_row(
                    args.family, size, "pure", "python", formula, n_vars
                )
                print(row)
                continue
            for kernel in kernels:
                row, wall = _bench_row(
                    args.family, size, "interned", kernel, formula, n_vars
                )
                interned_walls.append((kernel, wall))
                print(row)
        if pure_wall is not None:
            for kernel, wall in interned_walls:
                ratio = pure_wall / wall if wall > 0 else float("inf")
                print(
                    f"# {args.family} size={size}: pure/interned[{kernel}] "
                    f"wall ratio = {ratio:.2f}"
                )
    return 0


# ---------------------------------------------------------------------------
# selftest


def _shrink(failing: Callable[[Formula], bool], f: Formula) -> Formula:
    """Greedy minimization: keep any smaller candidate that still fails."""
    from .core import And, Const, Not, Or, Xor

    def candidates(g):
        yield Const(False)
        yield Const(True)
        if isinstance(g, Not):
            yield g.arg
            for c in candidates(g.arg):
                yield Not(c)
        elif isinstance(g, (And, Or, Xor)):
            yield g.left
            yield g.right
            cls = type(g)
            for c in candidates(g.left):
                yield cls(c, g.right)
            for c in candidates(g.right):
                yield cls(g.left, c)

    for _ in range(80):
        for cand in candidates(f):
            from .core import formula_size

            if formula_size(cand) < formula_size(f) and failing(cand):
                f = cand
                break
        else:
            return f
    return f


def run_selftest(
    seed: int = 0,
    cases: int = 300,
    max_vars: int = 6,
    sabotage: Optional[str] = None,
    echo: Callable[[str], None] = print,
) -> tuple[bool, Optional[str]]:
    """Randomized cross-backend oracle suite plus validator sweeps.

    Returns (ok, witness): on failure the witness is a minimized formula
    whose compilation disagrees with the truth-table oracle or breaks
    canonicity.  Deterministic for a fixed seed.
    """
    rng = random.Random(seed)
    reduce_nodes = sabotage != "no-reduce"

    def case_fails(f: Formula) -> bool:
        n = max(1, formula_max_var(f))
        want = oracle.formula_truth_table(f, n)
        st = pure.empty_store(reduce_nodes=reduce_nodes)
        ref, st = frontend.compile_pure(f, st)
        if not oracle.tables_equal(oracle.bdd_truth_table(ref, n, store=st), want):
            return True
        m = interned.new_manager(reduce_nodes=reduce_nodes)
        h = frontend.compile_interned(f, m)
        if not oracle.tables_equal(oracle.bdd_truth_table(h, n), want):
            return True
        if not pure.validate_store(st).ok:
            return True
        if not interned.validate_manager(m).ok:
            return True
        return False

    def pair_fails(pair: tuple[Formula, Formula]) -> bool:
        f, g = pair
        n = max(1, formula_max_var(f), formula_max_var(g))
        tf = oracle.formula_truth_table(f, n)
        tg = oracle.formula_truth_table(g, n)
        semantically_equal = oracle.tables_equal(tf, tg)
        st = pure.empty_store(reduce_nodes=reduce_nodes)
        rf, st = frontend.compile_pure(f, st)
        rg, st = frontend.compile_pure(g, st)
        if pure.eq(rf, rg) != semantically_equal:
            return True
        m = interned.new_manager(reduce_nodes=reduce_nodes)
        hf = frontend.compile_interned(f, m)
        hg = frontend.compile_interned(g, m)
        return interned.structural_eq(hf, hg) != semantically_equal

    for i in range(cases):
        f = frontend.random_formula(rng, max_var=max_vars, max_depth=8)
        if case_fails(f):
            small = _shrink(case_fails, f)
            echo(f"selftest: FAIL case {i}: oracle mismatch")
            echo(f"selftest: witness: {frontend.format_formula(small)}")
            return False, frontend.format_formula(small)
        if rng.random() < 0.5:
            g = frontend.random_equivalent(rng, f)
        else:
            g = frontend.random_formula(rng, max_var=max_vars, max_depth=8)
        if pair_fails((f, g)):
            small_g = _shrink(lambda x: pair_fails((f, x)), g)
            small_f = _shrink(lambda x: pair_fails((x, small_g)), f)
            echo(f"selftest: FAIL case {i}: canonicity mismatch")
            echo(
                "selftest: witness pair: "
                f"{frontend.format_formula(small_f)}  vs  "
                f"{frontend.format_formula(small_g)}"
            )
            return False, frontend.format_formula(small_f)
    echo(f"selftest: {cases} cases passed (seed={seed})")
    return True, None


def cmd_selftest(args) -> int:
    ok, _ = run_selftest(
        seed=args.seed,
        cases=args.cases,
        max_vars=args.max_vars,
        sabotage=args.sabotage,
    )
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bddhc",
        description="BDD-based tautology/satisfiability/equivalence checking, "
        "DOT export, and backend benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="compile and judge formula files")
    p_check.add_argument("kind", choices=["taut", "sat", "equiv"])
    p_check.add_argument("files", nargs="+", help="formula file(s)")
    p_check.add_argument(
        "--backend", choices=["pure", "interned", "both"], default="both"
    )
    p_check.add_argument("--fuel", type=int, default=None, help="pure backend only")
    p_check.set_defaults(func=cmd_check)

    p_dot = sub.add_parser("dot", help="export a formula's BDD as Graphviz text")
    p_dot.add_argument("file", help="formula file")
    p_dot.add_argument("--backend", choices=["pure", "interned"], default="interned")
    p_dot.add_argument("--fuel", type=int, default=None)
    p_dot.add_argument("--out", default=None, help="output path (default: stdout)")
    p_dot.add_argument("--dot-out", dest="dot_out", default=None, help="alias of --out")
    p_dot.set_defaults(func=cmd_dot)

    p_bench = sub.add_parser("bench", help="compare backends on formula families")
    p_bench.add_argument("family", choices=["queens", "pigeonhole"])
    p_bench.add_argument(
        "--sizes", default="4..6", help="comma list and/or ranges, e.g. 4..7 or 4,6"
    )
    p_bench.add_argument(
        "--backend", choices=["pure", "interned", "both"], default="both"
    )
    p_bench.add_argument(
        "--kernel",
        choices=["auto", "python", "compiled", "both"],
        default="auto",
        help="interned-backend kernel(s) to run",
    )
    p_bench.add_argument(
        "--size-cap", type=int, default=None, help="override the family size cap"
    )
    p_bench.set_defaults(func=cmd_bench)

    p_self = sub.add_parser("selftest", help="randomized cross-backend test suite")
    p_self.add_argument("--seed", type=int, default=0)
    p_self.add_argument("--cases", type=int, default=300)
    p_self.add_argument("--max-vars", dest="max_vars", type=int, default=6)
    p_self.add_argument("--sabotage", choices=["no-reduce"], help=argparse.SUPPRESS)
    p_self.set_defaults(func=cmd_selftest)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
