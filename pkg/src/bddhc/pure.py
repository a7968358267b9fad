"""Persistent-store BDD backend with explicit state threading.

Every operation takes a :class:`Store` and returns its result together
with a (possibly) extended store; no operation ever mutates a store a
caller can observe.  Old store values remain valid forever: they keep
answering lookups exactly as they did when created, which is what the
monotonicity tests rely on.

Representation
==============
A store is a small immutable record pointing into an append-only arena:

* ``cells`` -- list of decision nodes; node id ``i`` lives at ``cells[i-1]``.
* ``hmap``  -- dict from node triple to its id (the hash-consing map).
* four memo dicts for not/and/or/xor results.

A store value carries ``count`` (how many arena slots it can see) and
``next`` (the next fresh id).  Extending the newest version appends in
place, O(1); extending any older version first clones its visible prefix,
so earlier versions are never disturbed.  Entries added by newer versions
have ids ``>= next`` of every older version and are filtered out of the
older versions' views, which is what makes sharing sound.

Serialization
=============
``store_to_text``/``store_from_text`` use a line-based format::

    bddhc-store 1
    next <N>
    <id> <low> <var> <high>

with one record per node in increasing id order; ``<low>``/``<high>`` are
``T``, ``F`` or a decimal node id.  Memo tables are caches and are not
serialized.  Loading rebuilds the inverse map mechanically, so a corrupt
file yields a store whose defects ``validate_store`` reports rather than
an import error.
"""
from __future__ import annotations

import threading
from typing import Iterator, Mapping, NamedTuple, Optional

from .core import (
    LEAF_FALSE,
    LEAF_TRUE,
    Assignment,
    BddError,
    DanglingRef,
    InvalidChild,
    Leaf,
    Node,
    NodeRef,
    OrderViolation,
    OutOfFuel,
    ValidationReport,
    check_var,
    node_should_collapse,
)

_BINOPS = ("and", "or", "xor")

_STAT_KEYS = (
    "intern_hits",
    "intern_misses",
    "not_hits",
    "not_misses",
    "and_hits",
    "and_misses",
    "or_hits",
    "or_misses",
    "xor_hits",
    "xor_misses",
)


class _Shared:
    """Append-only arena shared by every version of one store lineage.

    ``tip`` is the slot count of the unique version that may extend in
    place; extending any other version clones first.  The lock serializes
    slot allocation (tip check + append must be atomic).  Reads need no
    lock: slots are never reassigned, and snapshots of the dict tables use
    ``dict.copy``, which the GIL makes atomic.  Single-key memo inserts
    are likewise GIL-atomic.  The stats counters are instrumentation; they
    are only guaranteed exact under single-threaded use.
    """

    __slots__ = ("cells", "hmap", "mand", "mor", "mxor", "mneg", "tip", "lock", "stats")

    def __init__(self) -> None:
        self.cells: list[Optional[Node]] = []
        self.hmap: dict[Node, int] = {}
        self.mand: dict[tuple[int, int], NodeRef] = {}
        self.mor: dict[tuple[int, int], NodeRef] = {}
        self.mxor: dict[tuple[int, int], NodeRef] = {}
        self.mneg: dict[int, NodeRef] = {}
        self.tip = 0
        self.lock = threading.Lock()
        self.stats = dict.fromkeys(_STAT_KEYS, 0)


def _ref_visible(ref: NodeRef, count: int, nxt: int) -> bool:
    if isinstance(ref, Leaf):
        return True
    return ref <= count or ref < nxt


class Store(NamedTuple):
    """One immutable version of a BDD store.

    Treat instances as opaque values; read through the ``graph``,
    ``hmap`` and ``memo`` views.  ``next`` is the next fresh node id.
    """

    shared: _Shared
    count: int
    next: int
    max_var: int
    reduce_nodes: bool

    @property
    def graph(self) -> "GraphView":
        return GraphView(self)

    @property
    def hmap(self) -> "HmapView":
        return HmapView(self)

    @property
    def memo(self) -> "MemoView":
        return MemoView(self)

    def __repr__(self) -> str:
        return f"<Store nodes={node_count(self)} next={self.next}>"


class GraphView(Mapping):
    """Read-only id -> Node mapping for one store version."""

    __slots__ = ("_st",)

    def __init__(self, st: Store) -> None:
        self._st = st

    def __getitem__(self, node_id: int) -> Node:
        st = self._st
        if isinstance(node_id, int) and 1 <= node_id <= st.count:
            node = st.shared.cells[node_id - 1]
            if node is not None:
                return node
        raise KeyError(node_id)

    def __iter__(self) -> Iterator[int]:
        st = self._st
        for i in range(st.count):
            if st.shared.cells[i] is not None:
                yield i + 1

    def __len__(self) -> int:
        return node_count(self._st)


class HmapView(Mapping):
    """Read-only Node -> id mapping for one store version."""

    __slots__ = ("_st",)

    def __init__(self, st: Store) -> None:
        self._st = st

    def __getitem__(self, node: Node) -> int:
        st = self._st
        node_id = st.shared.hmap.get(node)
        if node_id is None or not (node_id <= st.count or node_id < st.next):
            raise KeyError(node)
        return node_id

    def __iter__(self) -> Iterator[Node]:
        st = self._st
        for node, node_id in st.shared.hmap.copy().items():
            if node_id <= st.count or node_id < st.next:
                yield node

    def __len__(self) -> int:
        return sum(1 for _ in self)


class _MemoTableView(Mapping):
    __slots__ = ("_st", "_table", "_arity")

    def __init__(self, st: Store, table: dict, arity: int) -> None:
        self._st = st
        self._table = table
        self._arity = arity

    def _visible(self, key, value) -> bool:
        st = self._st
        ids = key if self._arity == 2 else (key,)
        for i in ids:
            if not _ref_visible(i, st.count, st.next):
                return False
        return _ref_visible(value, st.count, st.next)

    def __getitem__(self, key):
        value = self._table[key]
        if not self._visible(key, value):
            raise KeyError(key)
        return value

    def __iter__(self):
        for key, value in self._table.copy().items():
            if self._visible(key, value):
                yield key

    def __len__(self) -> int:
        return sum(1 for _ in self)


class MemoView:
    """Per-version views of the four memo tables."""

    __slots__ = ("mand", "mor", "mxor", "mneg")

    def __init__(self, st: Store) -> None:
        self.mand = _MemoTableView(st, st.shared.mand, 2)
        self.mor = _MemoTableView(st, st.shared.mor, 2)
        self.mxor = _MemoTableView(st, st.shared.mxor, 2)
        self.mneg = _MemoTableView(st, st.shared.mneg, 1)


# ---------------------------------------------------------------------------
# Construction


def empty_store(reduce_nodes: bool = True) -> Store:
    """A fresh store: no nodes, empty maps, next id 1.

    ``reduce_nodes=False`` disables the equal-children collapse in
    ``mk_node``; it exists so self-tests can verify that the validators
    and canonicity checks actually catch unreduced nodes.
    """
    return Store(_Shared(), 0, 1, 0, reduce_nodes)


def store_from_parts(
    graph: Mapping[int, Node],
    hmap: Optional[Mapping[Node, int]] = None,
    next_id: Optional[int] = None,
    memo_and: Optional[Mapping[tuple[int, int], NodeRef]] = None,
    memo_or: Optional[Mapping[tuple[int, int], NodeRef]] = None,
    memo_xor: Optional[Mapping[tuple[int, int], NodeRef]] = None,
    memo_neg: Optional[Mapping[int, NodeRef]] = None,
    reduce_nodes: bool = True,
) -> Store:
    """Build a store directly from raw tables, without any checking.

    This is the loader's and the test suite's backdoor: it will happily
    build broken stores so ``validate_store`` has something to report.
    When ``hmap`` is omitted the exact inverse of ``graph`` is used; when
    ``next_id`` is omitted, one past the largest id mentioned anywhere.
    """
    sh = _Shared()
    max_id = max(graph, default=0)
    if hmap is None:
        hmap = {node: node_id for node_id, node in graph.items()}
    mentioned = [max_id]
    mentioned += [node_id for node_id in hmap.values()]
    if next_id is None:
        next_id = max(mentioned, default=0) + 1
    sh.cells = [None] * max_id
    for node_id, node in graph.items():
        if node_id < 1:
            raise BddError(f"graph ids must be positive, got {node_id}")
        sh.cells[node_id - 1] = node
    sh.hmap = dict(hmap)
    sh.mand = dict(memo_and or {})
    sh.mor = dict(memo_or or {})
    sh.mxor = dict(memo_xor or {})
    sh.mneg = dict(memo_neg or {})
    sh.tip = max_id
    max_var = max((n.var for n in graph.values()), default=0)
    return Store(sh, max_id, next_id, max_var, reduce_nodes)


def clear_memo(st: Store) -> Store:
    """A store with the same graph but empty memo tables.

    The arena is cloned, so neither the original nor the cleared store
    can observe the other's future memoization.
    """
    sh = _clone_shared(st, copy_memo=False)
    return Store(sh, st.count, st.next, st.max_var, st.reduce_nodes)


def _clone_shared(st: Store, copy_memo: bool = True) -> _Shared:
    """Private copy of the prefix of the arena that ``st`` can see."""
    old = st.shared
    sh = _Shared()
    cnt, nxt = st.count, st.next
    sh.cells = old.cells[:cnt]
    sh.hmap = {n: i for n, i in old.hmap.copy().items() if i <= cnt or i < nxt}
    if copy_memo:
        for name in ("mand", "mor", "mxor"):
            src = getattr(old, name).copy()
            dst = {
                k: v
                for k, v in src.items()
                if _ref_visible(k[0], cnt, nxt)
                and _ref_visible(k[1], cnt, nxt)
                and _ref_visible(v, cnt, nxt)
            }
            setattr(sh, name, dst)
        sh.mneg = {
            k: v
            for k, v in old.mneg.copy().items()
            if _ref_visible(k, cnt, nxt) and _ref_visible(v, cnt, nxt)
        }
    sh.stats = old.stats.copy()
    sh.tip = cnt
    return sh


def store_stats(st: Store) -> dict[str, int]:
    """Snapshot of interning and memo hit/miss counters.

    Counters are instrumentation attached to the arena, not part of the
    store value: they count work done in this lineage, for reports and
    complexity tests.
    """
    return st.shared.stats.copy()


def node_count(st: Store) -> int:
    """Number of decision nodes visible in this store version."""
    cells = st.shared.cells
    return sum(1 for i in range(st.count) if cells[i] is not None)


def default_fuel(st: Store) -> int:
    """Recursion budget always sufficient for well-formed stores."""
    return st.max_var + 1


# ---------------------------------------------------------------------------
# Internal lookups (fast paths; views exist for external readers)


def _graph_get(st: Store, node_id: int) -> Optional[Node]:
    if 1 <= node_id <= st.count:
        return st.shared.cells[node_id - 1]
    return None


def _hmap_get(st: Store, node: Node) -> Optional[int]:
    node_id = st.shared.hmap.get(node)
    if node_id is not None and (node_id <= st.count or node_id < st.next):
        return node_id
    return None


def _memo_get(st: Store, table: dict, key) -> Optional[NodeRef]:
    value = table.get(key)
    if value is None:
        return None
    if isinstance(value, Leaf) or value <= st.count or value < st.next:
        return value
    return None


def _alloc(st: Store, node: Node) -> tuple[int, Store]:
    """Append ``node`` with the fresh id ``st.next``; clone first if this
    version is not the arena tip."""
    if st.next <= st.count:
        raise BddError(
            "store next counter is not past its allocated ids; "
            "refusing to allocate (run validate_store)"
        )
    with st.shared.lock:
        sh = st.shared if st.shared.tip == st.count else _clone_shared(st)
        node_id = st.next
        if node_id - 1 > len(sh.cells):
            sh.cells.extend([None] * (node_id - 1 - len(sh.cells)))
        sh.cells.append(node)
        sh.hmap[node] = node_id
        sh.tip = len(sh.cells)
    return node_id, Store(
        sh, node_id, node_id + 1, max(st.max_var, node.var), st.reduce_nodes
    )


def _bump(st: Store, key: str, by: int = 1) -> None:
    st.shared.stats[key] += by


# ---------------------------------------------------------------------------
# Operations


def mk_node(st: Store, low: NodeRef, var: int, high: NodeRef) -> tuple[NodeRef, Store]:
    """Hash-consing node constructor.

    Returns the collapsed branch when both branches are equal, the
    existing id when the triple is already allocated, and otherwise a
    fresh node under id ``st.next``.  The returned store extends ``st``
    monotonically; on the first two paths it *is* ``st``.
    """
    check_var(var)
    for child in (low, high):
        if isinstance(child, Leaf):
            continue
        if not isinstance(child, int) or isinstance(child, bool) or child < 1:
            raise InvalidChild(f"not a node reference: {child!r}")
        if child >= st.next:
            raise InvalidChild(f"child id {child} is not valid here (next={st.next})")
        node = _graph_get(st, child)
        if node is None:
            raise DanglingRef(f"child id {child} has no graph entry")
        if node.var <= var:
            raise OrderViolation(
                f"child {child} has variable x{node.var}, not below x{var}"
            )
    if st.reduce_nodes and node_should_collapse(low, high):
        return low, st
    node = Node(low, var, high)
    node_id = _hmap_get(st, node)
    if node_id is not None:
        _bump(st, "intern_hits")
        return node_id, st
    _bump(st, "intern_misses")
    return _alloc(st, node)


def denote(st: Store, ref: NodeRef, assignment: Assignment) -> bool:
    """Evaluate ``ref`` under one assignment by following branches.

    The assignment must cover every variable on the followed path.
    """
    steps = 0
    limit = st.count + 1
    while not isinstance(ref, Leaf):
        node = _graph_get(st, ref)
        if node is None:
            raise DanglingRef(f"node id {ref} has no graph entry")
        ref = node.high if assignment[node.var] else node.low
        steps += 1
        if steps > limit:
            raise BddError("store graph contains a cycle")
    return ref is LEAF_TRUE


def eq(a: NodeRef, b: NodeRef) -> bool:
    """Decidable equality of node references (leaf tags or ids).

    Within one store this coincides with semantic equality of the
    referenced functions, because construction is canonical.
    """
    return a == b


def neg(st: Store, ref: NodeRef, fuel: Optional[int] = None) -> tuple[NodeRef, Store]:
    """Complement: the result denotes the pointwise negation of ``ref``."""
    if fuel is None:
        fuel = default_fuel(st)
    return _neg_rec(st, ref, fuel)


def _neg_rec(st: Store, ref: NodeRef, fuel: int) -> tuple[NodeRef, Store]:
    if fuel <= 0:
        raise OutOfFuel("negation ran out of fuel")
    if ref is LEAF_TRUE:
        return LEAF_FALSE, st
    if ref is LEAF_FALSE:
        return LEAF_TRUE, st
    hit = _memo_get(st, st.shared.mneg, ref)
    if hit is not None:
        _bump(st, "not_hits")
        return hit, st
    _bump(st, "not_misses")
    node = _graph_get(st, ref)
    if node is None:
        raise DanglingRef(f"node id {ref} has no graph entry")
    low, st = _neg_rec(st, node.low, fuel - 1)
    high, st = _neg_rec(st, node.high, fuel - 1)
    result, st = mk_node(st, low, node.var, high)
    st.shared.mneg[ref] = result
    return result, st


def apply_binop(
    st: Store, op: str, a: NodeRef, b: NodeRef, fuel: Optional[int] = None
) -> tuple[NodeRef, Store]:
    """Pointwise binary operation (``op`` in ``and``/``or``/``xor``).

    Shannon expansion on the smaller top variable, memoized per
    operation on pairs of node ids; leaf arguments are resolved before
    the memo table is consulted.
    """
    if op not in _BINOPS:
        raise ValueError(f"unknown operation {op!r}")
    if fuel is None:
        fuel = default_fuel(st)
    return _apply_rec(st, op, a, b, fuel)


def _apply_rec(
    st: Store, op: str, a: NodeRef, b: NodeRef, fuel: int
) -> tuple[NodeRef, Store]:
    if fuel <= 0:
        raise OutOfFuel(f"{op} ran out of fuel")
    if a == b:
        return (LEAF_FALSE, st) if op == "xor" else (a, st)
    if op == "and":
        if a is LEAF_FALSE or b is LEAF_FALSE:
            return LEAF_FALSE, st
        if a is LEAF_TRUE:
            return b, st
        if b is LEAF_TRUE:
            return a, st
    elif op == "or":
        if a is LEAF_TRUE or b is LEAF_TRUE:
            return LEAF_TRUE, st
        if a is LEAF_FALSE:
            return b, st
        if b is LEAF_FALSE:
            return a, st
    else:
        if a is LEAF_FALSE:
            return b, st
        if b is LEAF_FALSE:
            return a, st
        # xor against true is negation; mneg carries the memoization
        if a is LEAF_TRUE:
            return _neg_rec(st, b, fuel)
        if b is LEAF_TRUE:
            return _neg_rec(st, a, fuel)
    table = getattr(st.shared, "m" + op)
    key = (a, b)
    hit = _memo_get(st, table, key)
    if hit is not None:
        _bump(st, op + "_hits")
        return hit, st
    _bump(st, op + "_misses")
    node_a = _graph_get(st, a)
    if node_a is None:
        raise DanglingRef(f"node id {a} has no graph entry")
    node_b = _graph_get(st, b)
    if node_b is None:
        raise DanglingRef(f"node id {b} has no graph entry")
    var = min(node_a.var, node_b.var)
    a_low, a_high = (node_a.low, node_a.high) if node_a.var == var else (a, a)
    b_low, b_high = (node_b.low, node_b.high) if node_b.var == var else (b, b)
    low, st = _apply_rec(st, op, a_low, b_low, fuel - 1)
    high, st = _apply_rec(st, op, a_high, b_high, fuel - 1)
    result, st = mk_node(st, low, var, high)
    # re-fetch: allocating above may have forked the arena, and the entry
    # must land in the arena this lineage now owns
    getattr(st.shared, "m" + op)[key] = result
    return result, st


def size(st: Store, ref: NodeRef) -> int:
    """Distinct nodes reachable from ``ref``, leaves included."""
    seen_ids: set[int] = set()
    seen_leaves: set[Leaf] = set()
    stack = [ref]
    while stack:
        cur = stack.pop()
        if isinstance(cur, Leaf):
            seen_leaves.add(cur)
            continue
        if cur in seen_ids:
            continue
        node = _graph_get(st, cur)
        if node is None:
            raise DanglingRef(f"node id {cur} has no graph entry")
        seen_ids.add(cur)
        stack.append(node.low)
        stack.append(node.high)
    return len(seen_ids) + len(seen_leaves)


def reachable_ids(st: Store, ref: NodeRef) -> set[int]:
    """Ids of the inner nodes reachable from ``ref``."""
    seen: set[int] = set()
    stack = [ref]
    while stack:
        cur = stack.pop()
        if isinstance(cur, Leaf) or cur in seen:
            continue
        node = _graph_get(st, cur)
        if node is None:
            raise DanglingRef(f"node id {cur} has no graph entry")
        seen.add(cur)
        stack.append(node.low)
        stack.append(node.high)
    return seen


# ---------------------------------------------------------------------------
# Validation


def validate_store(st: Store, check_memo_semantics: bool = False) -> ValidationReport:
    """Check every store invariant; violations are reported, not raised.

    The memo semantic check compares each cached result against a truth
    table of its operands and is exponential in the number of variables
    involved, so it only runs on request.
    """
    report = ValidationReport()
    graph = dict(_graph_items(st))
    nxt = st.next

    for node_id, node in graph.items():
        if node_id >= nxt:
            report.add("validity", f"graph id {node_id} is not below next={nxt}")
        for child in (node.low, node.high):
            if isinstance(child, Leaf):
                continue
            if child >= nxt:
                report.add(
                    "validity",
                    f"node {node_id} has child {child} not below next={nxt}",
                )
            if child not in graph:
                report.add(
                    "validity", f"node {node_id} has child {child} with no graph entry"
                )
            elif child >= node_id:
                report.add(
                    "acyclicity",
                    f"node {node_id} has child {child}, ids must decrease",
                )
        if node_should_collapse(node.low, node.high):
            report.add("reduced", f"node {node_id} has equal branches {node.low!r}")
        for child in (node.low, node.high):
            if isinstance(child, Leaf):
                continue
            child_node = graph.get(child)
            if child_node is not None and child_node.var <= node.var:
                report.add(
                    "ordered",
                    f"node {node_id} (x{node.var}) has child {child} "
                    f"labeled x{child_node.var}",
                )

    hmap_items = list(_hmap_items(st))
    hmap = dict(hmap_items)
    for node_id, node in graph.items():
        if hmap.get(node) != node_id:
            report.add(
                "left-inverse",
                f"graph has {node_id} -> {node}, but hmap maps that node to "
                f"{hmap.get(node)}",
            )
    for node, node_id in hmap_items:
        if graph.get(node_id) != node:
            report.add(
                "left-inverse",
                f"hmap has {node} -> {node_id}, but graph({node_id}) = "
                f"{graph.get(node_id)}",
            )
    by_node: dict[Node, list[int]] = {}
    for node_id, node in graph.items():
        by_node.setdefault(node, []).append(node_id)
    for node, ids in by_node.items():
        if len(ids) > 1:
            report.add("no-duplicates", f"node {node} allocated at ids {sorted(ids)}")

    memo = st.memo
    for name, table, arity in (
        ("mand", memo.mand, 2),
        ("mor", memo.mor, 2),
        ("mxor", memo.mxor, 2),
        ("mneg", memo.mneg, 1),
    ):
        for key in table:
            ids = key if arity == 2 else (key,)
            value = table[key]
            for i in ids:
                if i not in graph:
                    report.add(
                        "memo-domain", f"{name} key {key} references unknown id {i}"
                    )
            if not isinstance(value, Leaf) and value not in graph:
                report.add(
                    "memo-domain", f"{name}[{key}] = {value} references unknown id"
                )

    if check_memo_semantics and not report.violations:
        _check_memo_semantics(st, report)
    return report


def _check_memo_semantics(st: Store, report: ValidationReport) -> None:
    from itertools import product

    memo = st.memo
    ops = {
        "mand": (memo.mand, lambda x, y: x and y),
        "mor": (memo.mor, lambda x, y: x or y),
        "mxor": (memo.mxor, lambda x, y: x != y),
    }
    for name, (table, fn) in ops.items():
        for (a, b), value in table.items():
            vars_ = _cone_vars(st, a) | _cone_vars(st, b) | _cone_vars(st, value)
            for bits in product((False, True), repeat=len(vars_)):
                assignment = dict(zip(sorted(vars_), bits))
                want = fn(denote(st, a, assignment), denote(st, b, assignment))
                if denote(st, value, assignment) != want:
                    report.add(
                        "memo-semantics",
                        f"{name}[({a}, {b})] = {value!r} is wrong under {assignment}",
                    )
                    break
    for a, value in memo.mneg.items():
        vars_ = _cone_vars(st, a) | _cone_vars(st, value)
        for bits in product((False, True), repeat=len(vars_)):
            assignment = dict(zip(sorted(vars_), bits))
            if denote(st, value, assignment) == denote(st, a, assignment):
                report.add(
                    "memo-semantics",
                    f"mneg[{a}] = {value!r} is wrong under {assignment}",
                )
                break


def _cone_vars(st: Store, ref: NodeRef) -> set[int]:
    out: set[int] = set()
    for node_id in reachable_ids(st, ref):
        node = _graph_get(st, node_id)
        if node is not None:
            out.add(node.var)
    return out


def _graph_items(st: Store) -> Iterator[tuple[int, Node]]:
    cells = st.shared.cells
    for i in range(st.count):
        node = cells[i]
        if node is not None:
            yield i + 1, node


def _hmap_items(st: Store) -> Iterator[tuple[Node, int]]:
    for node, node_id in st.shared.hmap.copy().items():
        if node_id <= st.count or node_id < st.next:
            yield node, node_id


# ---------------------------------------------------------------------------
# Serialization


def _ref_token(ref: NodeRef) -> str:
    if ref is LEAF_TRUE:
        return "T"
    if ref is LEAF_FALSE:
        return "F"
    return str(ref)


def _parse_ref(token: str, lineno: int) -> NodeRef:
    if token == "T":
        return LEAF_TRUE
    if token == "F":
        return LEAF_FALSE
    try:
        value = int(token)
    except ValueError:
        raise BddError(f"line {lineno}: bad node reference {token!r}") from None
    if value < 1:
        raise BddError(f"line {lineno}: node ids must be positive, got {value}")
    return value


def store_to_text(st: Store) -> str:
    """Serialize the visible graph in the line format described above."""
    lines = ["bddhc-store 1", f"next {st.next}"]
    for node_id, node in _graph_items(st):
        lines.append(
            f"{node_id} {_ref_token(node.low)} {node.var} {_ref_token(node.high)}"
        )
    return "\n".join(lines) + "\n"


def store_from_text(text: str) -> Store:
    """Parse the line format; the result may be invalid, validate it."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != "bddhc-store 1":
        raise BddError("line 1: expected header 'bddhc-store 1'")
    if len(lines) < 2 or not lines[1].strip().startswith("next "):
        raise BddError("line 2: expected 'next <id>'")
    try:
        next_id = int(lines[1].split()[1])
    except (IndexError, ValueError):
        raise BddError("line 2: expected 'next <id>'") from None
    if next_id < 1:
        raise BddError("line 2: next must be positive")
    graph: dict[int, Node] = {}
    for lineno, raw in enumerate(lines[2:], start=3):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 4:
            raise BddError(f"line {lineno}: expected 'id low var high'")
        node_id = _parse_ref(fields[0], lineno)
        if isinstance(node_id, Leaf):
            raise BddError(f"line {lineno}: record id must be a number")
        low = _parse_ref(fields[1], lineno)
        high = _parse_ref(fields[3], lineno)
        try:
            var = int(fields[2])
        except ValueError:
            raise BddError(f"line {lineno}: bad variable {fields[2]!r}") from None
        if var < 1:
            raise BddError(f"line {lineno}: variables are 1-based, got {var}")
        if node_id in graph:
            raise BddError(f"line {lineno}: duplicate record for id {node_id}")
        graph[node_id] = Node(low, var, high)
    return store_from_parts(graph, next_id=next_id)
