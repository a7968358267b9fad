"""Shared test machinery: reference stores and random operation traces."""
from __future__ import annotations

import random

from bddhc.core import LEAF_FALSE, LEAF_TRUE, Node
from bddhc import pure


def ascending_chain_store():
    """Hand-numbered three-node chain: 1 -> (F, x1, 2), 2 -> (F, x2, 3),
    3 -> (F, x3, T).  Ids ascend toward the leaves, the opposite of what
    mk_node produces, so this store is useful for read-path tests and as
    a known validator offender."""
    graph = {
        1: Node(LEAF_FALSE, 1, 2),
        2: Node(LEAF_FALSE, 2, 3),
        3: Node(LEAF_FALSE, 3, LEAF_TRUE),
    }
    return pure.store_from_parts(graph)


def gen_trace(rng: random.Random, length: int, max_var: int = 4) -> list[tuple]:
    """Random operation trace; step k may reference any earlier result.

    Result slots 0 and 1 are pre-seeded with the true and false leaves.
    """
    ops = []
    produced = 2
    for _ in range(length):
        roll = rng.random()
        if roll < 0.3:
            ops.append(("var", rng.randint(1, max_var)))
        elif roll < 0.5:
            ops.append(("neg", rng.randrange(produced)))
        else:
            ops.append(
                (
                    "binop",
                    rng.choice(("and", "or", "xor")),
                    rng.randrange(produced),
                    rng.randrange(produced),
                )
            )
        produced += 1
    return ops


def play_pure(ops, st=None, on_step=None, clear_between=False):
    """Run a trace on the pure backend; returns (refs, final store).

    ``on_step(pre, post, ref)`` is called after each operation.
    """
    refs = [LEAF_TRUE, LEAF_FALSE]
    if st is None:
        st = pure.empty_store()
    for op in ops:
        if clear_between:
            st = pure.clear_memo(st)
        pre = st
        if op[0] == "var":
            ref, st = pure.mk_node(st, LEAF_FALSE, op[1], LEAF_TRUE)
        elif op[0] == "neg":
            ref, st = pure.neg(st, refs[op[1]])
        else:
            ref, st = pure.apply_binop(st, op[1], refs[op[2]], refs[op[3]])
        refs.append(ref)
        if on_step is not None:
            on_step(pre, st, ref)
    return refs, st


def play_interned(m, ops, clear_between=False):
    """Run a trace on an interned manager; returns the produced handles."""
    handles = [m.true, m.false]
    for op in ops:
        if clear_between:
            m.clear_caches()
        if op[0] == "var":
            handles.append(m.node(op[1], m.false, m.true))
        elif op[0] == "neg":
            handles.append(m.neg(handles[op[1]]))
        else:
            handles.append(m.apply_binop(op[1], handles[op[2]], handles[op[3]]))
    return handles
