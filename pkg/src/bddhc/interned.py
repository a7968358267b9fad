"""Interned BDD backend: a mutable manager enforcing maximal sharing.

Handles carry unique identifiers, so equality of functions is one integer
comparison.  The hot kernel (node construction and the memoized
operations) exists twice: a compiled Cython extension and a pure-Python
twin with identical observable behavior.  The extension is preferred at
import time; set ``BDDHC_PURE_PYTHON=1`` to force the fallback, or pass
``kernel=`` to :func:`new_manager` to pick explicitly.

This module also hosts everything that does not need to be fast:
validation, DOT export, reachability, and rebuilding helpers.
"""
from __future__ import annotations

import os
from itertools import product

from .core import ForeignHandle, ValidationReport
from . import _pykernel

PyManager = _pykernel.Manager
uid = _pykernel.uid

CompiledManager = None
if os.environ.get("BDDHC_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _speedups  # type: ignore[attr-defined]

        CompiledManager = _speedups.Manager
    except ImportError:
        CompiledManager = None

HAVE_SPEEDUPS = CompiledManager is not None

#: Default manager class: compiled when available, Python otherwise.
Manager = CompiledManager if HAVE_SPEEDUPS else PyManager

_KERNELS = {"python": PyManager, "compiled": CompiledManager, "auto": Manager}


def kernel_name() -> str:
    """Name of the kernel behind the default ``Manager``."""
    return "compiled" if HAVE_SPEEDUPS else "python"


def available_kernels() -> list[str]:
    return ["python", "compiled"] if HAVE_SPEEDUPS else ["python"]


def new_manager(kernel: str = "auto", reduce_nodes: bool = True):
    """Fresh manager from the chosen kernel (``auto``/``python``/``compiled``)."""
    cls = _KERNELS.get(kernel)
    if cls is None:
        have = ", ".join(available_kernels())
        raise ValueError(f"kernel {kernel!r} not available (have: {have})")
    return cls(reduce_nodes=reduce_nodes)


def structural_eq(a, b) -> bool:
    """Uid comparison; coincides with deep equality for pooled handles."""
    if a.tag != b.tag:
        raise ForeignHandle("handles belong to different managers")
    return a.uid == b.uid


# ---------------------------------------------------------------------------
# Inspection helpers (kernel-independent: they only read handle fields)


def reachable(root) -> list:
    """Handles reachable from ``root``, sorted by uid.

    Construction hands out child uids before parent uids, so this order
    is topological: every node's children appear earlier in the list.
    """
    seen = {}
    stack = [root]
    while stack:
        h = stack.pop()
        if h.uid in seen:
            continue
        seen[h.uid] = h
        if h.terminal < 0:
            stack.append(h.low)
            stack.append(h.high)
    return [seen[u] for u in sorted(seen)]


def bdd_size(root) -> int:
    """Distinct nodes reachable from ``root``, leaves included."""
    return len(reachable(root))


def denote_handle(root, assignment) -> bool:
    """Evaluate a handle under one assignment by following branches."""
    h = root
    while h.terminal < 0:
        h = h.high if assignment[h.var] else h.low
    return h.terminal == 1


def rebuild(m, root):
    """Reconstruct ``root`` bottom-up through ``m``'s constructors.

    Rebuilding into the owning manager must return the identical uids;
    rebuilding into a fresh manager copies the BDD across.
    """
    done: dict[int, object] = {}

    def go(h):
        hit = done.get(h.uid)
        if hit is not None:
            return hit
        if h.terminal == 1:
            made = m.true
        elif h.terminal == 0:
            made = m.false
        else:
            made = m.node(h.var, go(h.low), go(h.high))
        done[h.uid] = made
        return made

    return go(root)


def import_pure(m, store, ref):
    """Mirror a pure-backend BDD into manager ``m``, preserving structure."""
    from .core import Leaf

    done: dict[int, object] = {}

    def go(r):
        if isinstance(r, Leaf):
            return m.true if r is Leaf.TRUE else m.false
        hit = done.get(r)
        if hit is not None:
            return hit
        node = store.graph[r]
        made = m.node(node.var, go(node.low), go(node.high))
        done[r] = made
        return made

    return go(ref)


# ---------------------------------------------------------------------------
# Validation


def _shape(h) -> tuple:
    if h.terminal >= 0:
        return ("leaf", h.terminal)
    return ("node", h.var, h.low.uid, h.high.uid)


def validate_manager(m, check_cache_semantics: bool = False) -> ValidationReport:
    """Check pool and cache invariants; violations are reported, not raised.

    The cache semantic check evaluates every cached result against its
    operands over all assignments of the variables involved, so it is
    exponential and only runs on request.
    """
    report = ValidationReport()
    pool = list(m.iter_pool())

    by_uid: dict[int, object] = {}
    for h in pool:
        if h.uid in by_uid:
            report.add("uid-unique", f"uid {h.uid} used by two pool entries")
        by_uid[h.uid] = h
    by_shape: dict[tuple, int] = {}
    for h in pool:
        s = _shape(h)
        if s in by_shape:
            report.add(
                "pool-unique",
                f"shape {s} pooled twice (uids {by_shape[s]} and {h.uid})",
            )
        else:
            by_shape[s] = h.uid

    for h in pool:
        if h.terminal >= 0:
            continue
        if h.low.uid == h.high.uid:
            report.add("reduced", f"node uid {h.uid} has equal branches")
        for child in (h.low, h.high):
            if child.uid not in by_uid or by_uid[child.uid] is not child:
                report.add(
                    "liveness", f"node uid {h.uid} has a child outside the pool"
                )
            if child.terminal < 0 and child.var <= h.var:
                report.add(
                    "ordered",
                    f"node uid {h.uid} (x{h.var}) has child labeled x{child.var}",
                )

    caches = m.memo_entries()
    for op, table in caches.items():
        for key, value in list(table.items()):
            uids = (key,) if op == "not" else key
            for u in uids:
                if u not in by_uid:
                    report.add("cache-liveness", f"{op} cache key {key} is not live")
            if value.uid not in by_uid or by_uid[value.uid] is not value:
                report.add(
                    "cache-liveness", f"{op} cache value for {key} is not pooled"
                )

    if check_cache_semantics and not report.violations:
        _check_cache_semantics(m, by_uid, report)
    return report


def _check_cache_semantics(m, by_uid, report) -> None:
    ops = {
        "and": lambda x, y: x and y,
        "or": lambda x, y: x or y,
        "xor": lambda x, y: x != y,
    }
    caches = m.memo_entries()
    for u, value in caches["not"].items():
        a = by_uid[u]
        vars_ = _cone_vars(a) | _cone_vars(value)
        for bits in product((False, True), repeat=len(vars_)):
            assignment = dict(zip(sorted(vars_), bits))
            if denote_handle(value, assignment) == denote_handle(a, assignment):
                report.add("cache-semantics", f"not cache wrong for uid {u}")
                break
    for op, fn in ops.items():
        for (ua, ub), value in caches[op].items():
            a, b = by_uid[ua], by_uid[ub]
            vars_ = _cone_vars(a) | _cone_vars(b) | _cone_vars(value)
            for bits in product((False, True), repeat=len(vars_)):
                assignment = dict(zip(sorted(vars_), bits))
                want = fn(denote_handle(a, assignment), denote_handle(b, assignment))
                if denote_handle(value, assignment) != want:
                    report.add(
                        "cache-semantics", f"{op} cache wrong for ({ua}, {ub})"
                    )
                    break


def _cone_vars(root) -> set[int]:
    return {h.var for h in reachable(root) if h.terminal < 0}


# ---------------------------------------------------------------------------
# DOT export


def to_dot(root, graph_name: str = "bdd") -> str:
    """Graphviz text for the BDD under ``root``.

    One record per reachable node, named ``n<uid>``; leaves are boxes
    labeled T/F, decision nodes are circles labeled with their variable.
    The 0-branch is a dashed edge, the 1-branch solid.  Shared nodes
    appear exactly once, children before parents.
    """
    lines = [f"digraph {graph_name} {{"]
    for h in reachable(root):
        if h.terminal >= 0:
            label = "T" if h.terminal == 1 else "F"
            lines.append(f'  n{h.uid} [label="{label}", shape=box];')
        else:
            lines.append(f'  n{h.uid} [label="x{h.var}", shape=circle];')
            lines.append(f"  n{h.uid} -> n{h.low.uid} [style=dashed];")
            lines.append(f"  n{h.uid} -> n{h.high.uid} [style=solid];")
    lines.append("}")
    return "\n".join(lines) + "\n"
