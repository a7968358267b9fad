import random

import pytest

from bddhc.core import ForeignHandle, InvalidChild, OrderViolation, VarOutOfRange
from bddhc import frontend, interned, oracle
from bddhc._pykernel import Handle as PyHandle, Manager as PyManager

from util import gen_trace, play_interned


# -- manager construction ----------------------------------------------


def test_new_manager_pools_the_leaves(manager):
    assert manager.pool_size() == 2
    assert manager.true.uid != manager.false.uid
    assert manager.true.uid == 1
    assert manager.false.uid == 2


def test_leaves_are_interned(manager):
    assert manager.true.uid == manager.true.uid
    assert manager.constant(True) is manager.true
    assert manager.constant(False) is manager.false


# -- node constructor ---------------------------------------------------


def test_node_collapses_equal_children(manager):
    h = manager.node(3, manager.false, manager.true)
    assert manager.node(2, h, h) is h
    assert manager.pool_size() == 3


def test_node_is_shared(manager):
    before = manager.pool_size()
    h1 = manager.node(2, manager.false, manager.true)
    mid = manager.pool_size()
    h2 = manager.node(2, manager.false, manager.true)
    assert h1.uid == h2.uid
    assert mid == before + 1
    assert manager.pool_size() == mid


def test_shannon_expansion_collapses_to_one_node(manager):
    # f(0,0)=T, f(0,1)=F, f(1,0)=T, f(1,1)=F over (x1, x2)
    branch0 = manager.node(2, manager.true, manager.false)
    branch1 = manager.node(2, manager.true, manager.false)
    root = manager.node(1, branch0, branch1)
    assert root is branch0
    assert root.var == 2
    assert root.low.terminal == 1 and root.high.terminal == 0
    assert manager.pool_size() == 3


def test_node_order_violation(manager):
    h = manager.node(2, manager.false, manager.true)
    with pytest.raises(OrderViolation):
        manager.node(2, h, manager.true)
    with pytest.raises(OrderViolation):
        manager.node(5, manager.true, h)
    with pytest.raises(VarOutOfRange):
        manager.node(0, manager.false, manager.true)


def test_foreign_handle_same_kernel(kernel):
    m1 = interned.new_manager(kernel)
    m2 = interned.new_manager(kernel)
    with pytest.raises(ForeignHandle):
        m1.node(1, m2.false, m1.true)
    with pytest.raises(ForeignHandle):
        m1.neg(m2.true)
    with pytest.raises(ForeignHandle):
        m1.apply_binop("and", m1.true, m2.true)
    with pytest.raises(ForeignHandle):
        m1.structural_eq(m1.true, m2.true)


@pytest.mark.skipif(not interned.HAVE_SPEEDUPS, reason="compiled kernel unavailable")
def test_foreign_handle_across_kernels():
    mp = interned.new_manager("python")
    mc = interned.new_manager("compiled")
    with pytest.raises(ForeignHandle):
        mc.node(1, mp.false, mp.true)
    with pytest.raises(ForeignHandle):
        mp.node(1, mc.false, mc.true)
    with pytest.raises(ForeignHandle):
        interned.structural_eq(mp.true, mc.true)


def test_non_handle_rejected(manager):
    with pytest.raises(InvalidChild):
        manager.node(1, "nope", manager.true)


# -- structural equality -------------------------------------------------


def test_structural_eq_basics(manager):
    h = manager.node(1, manager.false, manager.true)
    assert manager.structural_eq(h, h)
    assert not manager.structural_eq(manager.true, manager.false)
    assert interned.structural_eq(manager.true, manager.true)


def test_structural_eq_tracks_truth_tables(manager):
    rng = random.Random(23)
    for _ in range(150):
        f = frontend.random_formula(rng, max_var=4, max_depth=5)
        g = frontend.random_formula(rng, max_var=4, max_depth=5)
        hf = frontend.compile_interned(f, manager)
        hg = frontend.compile_interned(g, manager)
        same = oracle.tables_equal(
            oracle.formula_truth_table(f, 4), oracle.formula_truth_table(g, 4)
        )
        assert manager.structural_eq(hf, hg) == same


# -- negation -------------------------------------------------------------


def test_neg_leaves(manager):
    assert manager.neg(manager.true) is manager.false
    assert manager.neg(manager.false) is manager.true


def test_double_negation_gives_same_uid(manager):
    rng = random.Random(4)
    for _ in range(25):
        f = frontend.random_formula(rng, max_var=5, max_depth=6)
        h = frontend.compile_interned(f, manager)
        assert manager.neg(manager.neg(h)).uid == h.uid


def test_neg_miss_count_bounded_by_inner_size(manager):
    f = frontend.parse("(x1 & x2) | (x3 ^ x4) | !x5")
    h = frontend.compile_interned(f, manager)
    inner = sum(1 for x in interned.reachable(h) if x.terminal < 0)
    before = manager.stats()["not_misses"]
    manager.neg(h)
    assert manager.stats()["not_misses"] - before <= inner


# -- binary operations ------------------------------------------------------


def test_binop_identities(manager):
    b = manager.node(3, manager.false, manager.true)
    assert manager.apply_binop("or", manager.false, b) is b
    assert manager.apply_binop("and", manager.true, b) is b
    assert manager.apply_binop("xor", manager.false, b) is b
    assert manager.apply_binop("and", b, manager.false) is manager.false
    assert manager.apply_binop("or", b, manager.true) is manager.true


def test_binop_contradiction_and_tautology(manager):
    a = manager.node(1, manager.false, manager.true)
    na = manager.neg(a)
    assert manager.apply_binop("and", a, na) is manager.false
    assert manager.apply_binop("or", a, na) is manager.true
    assert manager.apply_binop("xor", a, a) is manager.false


def test_binop_unknown_op(manager):
    with pytest.raises(ValueError):
        manager.apply_binop("implies", manager.true, manager.true)


def test_binop_miss_count_bounded(manager):
    rng = random.Random(6)
    for _ in range(30):
        f = frontend.random_formula(rng, max_var=5, max_depth=5)
        g = frontend.random_formula(rng, max_var=5, max_depth=5)
        a = frontend.compile_interned(f, manager)
        b = frontend.compile_interned(g, manager)
        op = rng.choice(("and", "or", "xor"))
        sa = interned.bdd_size(a)
        sb = interned.bdd_size(b)
        before = manager.stats()[f"{op}_misses"]
        manager.apply_binop(op, a, b)
        assert manager.stats()[f"{op}_misses"] - before <= sa * sb


# -- uids ---------------------------------------------------------------


def test_uid_accessors(manager):
    assert interned.uid(manager.true) == manager.true.uid
    h = manager.node(1, manager.false, manager.true)
    uids = {manager.true.uid, manager.false.uid, h.uid}
    assert len(uids) == 3


def test_uid_order_is_topological(manager):
    f = frontend.parse("(x1 ^ x2) & (x2 | !x3)")
    h = frontend.compile_interned(f, manager)
    seen = set()
    for node in interned.reachable(h):
        if node.terminal < 0:
            assert node.low.uid in seen
            assert node.high.uid in seen
        seen.add(node.uid)


# -- validation ----------------------------------------------------------


def test_validate_fresh_manager(manager):
    assert interned.validate_manager(manager).ok


def test_validate_after_random_trace(manager):
    rng = random.Random(17)
    ops = gen_trace(rng, 60, max_var=4)
    play_interned(manager, ops)
    assert interned.validate_manager(manager, check_cache_semantics=True).ok


def test_validate_detects_duplicate_pool_shapes():
    m = PyManager()
    h = m.node(1, m.false, m.true)
    clone = PyHandle(99, h.var, h.low, h.high, -1, h.tag)
    m._unique[("backdoor", 0, 0)] = clone
    assert "pool-unique" in interned.validate_manager(m).codes()


def test_validate_detects_dead_cache_entries():
    m = PyManager()
    m._not_cache[123] = m.true
    assert "cache-liveness" in interned.validate_manager(m).codes()


def test_validate_detects_wrong_cache_semantics():
    m = PyManager()
    a = m.node(1, m.false, m.true)
    b = m.node(2, m.false, m.true)
    m._and_cache[(a.uid, b.uid)] = m.true
    assert interned.validate_manager(m).ok
    report = interned.validate_manager(m, check_cache_semantics=True)
    assert "cache-semantics" in report.codes()


def test_validate_unreduced_pool_node():
    m = PyManager(reduce_nodes=False)
    m.node(1, m.true, m.true)
    assert "reduced" in interned.validate_manager(m).codes()


# -- maximal sharing ------------------------------------------------------


def test_rebuild_reuses_identical_uids(manager):
    rng = random.Random(29)
    ops = gen_trace(rng, 50, max_var=4)
    handles = play_interned(manager, ops)
    pool_before = manager.pool_size()
    for h in handles:
        assert interned.rebuild(manager, h).uid == h.uid
    assert manager.pool_size() == pool_before


def test_pool_shapes_distinct_after_trace(manager):
    rng = random.Random(31)
    play_interned(manager, gen_trace(rng, 80, max_var=4))
    shapes = set()
    for h in manager.iter_pool():
        s = (h.terminal, h.var, h.low.uid if h.low else 0, h.high.uid if h.high else 0)
        assert s not in shapes
        shapes.add(s)


def test_rebuild_into_fresh_manager(kernel):
    m1 = interned.new_manager(kernel)
    f = frontend.parse("x1 ^ (x2 & !x3)")
    h1 = frontend.compile_interned(f, m1)
    m2 = interned.new_manager(kernel)
    h2 = interned.rebuild(m2, h1)
    assert oracle.tables_equal(
        oracle.bdd_truth_table(h1, 3), oracle.bdd_truth_table(h2, 3)
    )


# -- memo transparency -----------------------------------------------------


def test_clear_caches_does_not_change_uids(kernel):
    rng = random.Random(37)
    ops = gen_trace(rng, 40, max_var=4)
    m1 = interned.new_manager(kernel)
    m2 = interned.new_manager(kernel)
    h1 = play_interned(m1, ops)
    h2 = play_interned(m2, ops, clear_between=True)
    assert [h.uid for h in h1] == [h.uid for h in h2]


# -- cross-kernel parity -----------------------------------------------------


@pytest.mark.skipif(not interned.HAVE_SPEEDUPS, reason="compiled kernel unavailable")
def test_kernels_agree_on_uids_and_stats():
    rng = random.Random(41)
    for _ in range(10):
        ops = gen_trace(rng, 60, max_var=5)
        mp = interned.new_manager("python")
        mc = interned.new_manager("compiled")
        hp = play_interned(mp, ops)
        hc = play_interned(mc, ops)
        assert [h.uid for h in hp] == [h.uid for h in hc]
        assert mp.stats() == mc.stats()
        assert mp.pool_size() == mc.pool_size()


@pytest.mark.skipif(not interned.HAVE_SPEEDUPS, reason="compiled kernel unavailable")
def test_kernel_selection():
    assert interned.kernel_name() == "compiled"
    assert interned.Manager is interned.CompiledManager
    assert interned.new_manager("python").IMPL == "python"
    assert interned.new_manager("compiled").IMPL == "compiled"
    with pytest.raises(ValueError):
        interned.new_manager("fortran")


# -- reset -------------------------------------------------------------------


def test_reset_invalidates_old_handles(manager):
    h = manager.node(1, manager.false, manager.true)
    manager.reset()
    assert manager.pool_size() == 2
    with pytest.raises(ForeignHandle):
        manager.neg(h)


# -- DOT export ---------------------------------------------------------------


def test_dot_single_node(manager):
    h = frontend.compile_interned(frontend.parse("!x2"), manager)
    text = interned.to_dot(h)
    assert text.startswith("digraph bdd {")
    assert f'n{h.uid} [label="x2", shape=circle];' in text
    assert f"n{h.uid} -> n{manager.true.uid} [style=dashed];" in text
    assert f"n{h.uid} -> n{manager.false.uid} [style=solid];" in text
    assert text.count("shape=circle") == 1
    assert text.count("shape=box") == 2


def test_dot_xor_shares_nodes(manager):
    h = frontend.compile_interned(frontend.parse("x1 ^ x2"), manager)
    text = interned.to_dot(h)
    assert text.count("shape=circle") == 3  # one x1 node, two x2 nodes
    assert text.count("shape=box") == 2


def test_dot_constant(manager):
    text = interned.to_dot(manager.true)
    assert text.count("label=") == 1
    assert '[label="T", shape=box];' in text
    assert "->" not in text


def test_dot_emits_children_first(manager):
    h = frontend.compile_interned(frontend.parse("(x1 & x2) | x3"), manager)
    text = interned.to_dot(h)
    declared = []
    for line in text.splitlines():
        line = line.strip()
        if "[label=" in line:
            declared.append(line.split()[0])
        elif "->" in line:
            src = line.split()[0]
            assert src in declared


def test_import_pure_matches_interned_compile(manager):
    from bddhc import pure

    f = frontend.parse("(x1 | x2) ^ !x3")
    st = pure.empty_store()
    ref, st = frontend.compile_pure(f, st)
    mirrored = interned.import_pure(manager, st, ref)
    direct = frontend.compile_interned(f, manager)
    assert manager.structural_eq(mirrored, direct)
