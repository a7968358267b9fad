# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernel for the interned backend.

Port of ``bddhc._pykernel`` with C-typed handles and recursion; observable
behavior (uids, statistics, errors) matches the Python kernel exactly, and
the cross-kernel tests hold both to that.
"""

import cython

from .core import ForeignHandle, InvalidChild, OrderViolation, check_var
from ._pykernel import _manager_ids


@cython.final
cdef class Handle:
    """Reference to one hash-consed node; compare via ``uid``."""

    cdef readonly long long uid
    cdef readonly int var
    cdef readonly Handle low
    cdef readonly Handle high
    cdef readonly int terminal
    cdef readonly long long tag

    def __repr__(self):
        if self.terminal == 1:
            return f"<Handle {self.uid}: T>"
        if self.terminal == 0:
            return f"<Handle {self.uid}: F>"
        return f"<Handle {self.uid}: x{self.var} -> {self.low.uid}/{self.high.uid}>"


cdef Handle _make_handle(long long uid, int var, Handle low, Handle high,
                         int terminal, long long tag):
    cdef Handle h = Handle.__new__(Handle)
    h.uid = uid
    h.var = var
    h.low = low
    h.high = high
    h.terminal = terminal
    h.tag = tag
    return h


@cython.final
cdef class Manager:
    """Compiled twin of ``bddhc._pykernel.Manager``; same contract."""

    cdef long long _tag
    cdef readonly bint reduce_nodes
    cdef dict _unique
    cdef dict _not_cache
    cdef dict _and_cache
    cdef dict _or_cache
    cdef dict _xor_cache
    cdef readonly long long intern_hits
    cdef readonly long long intern_misses
    cdef readonly long long not_hits
    cdef readonly long long not_misses
    cdef readonly long long and_hits
    cdef readonly long long and_misses
    cdef readonly long long or_hits
    cdef readonly long long or_misses
    cdef readonly long long xor_hits
    cdef readonly long long xor_misses
    cdef readonly Handle true
    cdef readonly Handle false
    cdef long long _next_uid

    @property
    def IMPL(self):
        return "compiled"

    def __init__(self, reduce_nodes=True):
        self._tag = next(_manager_ids)
        self.reduce_nodes = reduce_nodes
        self._unique = {}
        self._not_cache = {}
        self._and_cache = {}
        self._or_cache = {}
        self._xor_cache = {}
        self.intern_hits = 0
        self.intern_misses = 0
        self.not_hits = 0
        self.not_misses = 0
        self.and_hits = 0
        self.and_misses = 0
        self.or_hits = 0
        self.or_misses = 0
        self.xor_hits = 0
        self.xor_misses = 0
        self.true = _make_handle(1, 0, None, None, 1, self._tag)
        self.false = _make_handle(2, 0, None, None, 0, self._tag)
        self._next_uid = 3

    # -- construction -------------------------------------------------

    def node(self, var, low, high):
        """Reducing, hash-consing constructor for a decision node."""
        check_var(var)
        self._check_owned(low)
        self._check_owned(high)
        cdef Handle l = <Handle> low
        cdef Handle h = <Handle> high
        cdef int v = var
        if l.terminal < 0 and l.var <= v:
            raise OrderViolation(f"child variable x{l.var} is not below x{v}")
        if h.terminal < 0 and h.var <= v:
            raise OrderViolation(f"child variable x{h.var} is not below x{v}")
        return self._node(v, l, h)

    cdef Handle _node(self, int var, Handle low, Handle high):
        if self.reduce_nodes and low.uid == high.uid:
            return low
        key = (var, low.uid, high.uid)
        found = self._unique.get(key)
        if found is not None:
            self.intern_hits += 1
            return <Handle> found
        self.intern_misses += 1
        cdef Handle made = _make_handle(self._next_uid, var, low, high, -1, self._tag)
        self._next_uid += 1
        self._unique[key] = made
        return made

    def constant(self, value):
        return self.true if value else self.false

    # -- operations ----------------------------------------------------

    def neg(self, a):
        """Pointwise complement, memoized per node."""
        self._check_owned(a)
        return self._neg_rec(<Handle> a)

    cdef Handle _neg_rec(self, Handle a):
        if a.terminal == 1:
            return self.false
        if a.terminal == 0:
            return self.true
        found = self._not_cache.get(a.uid)
        if found is not None:
            self.not_hits += 1
            return <Handle> found
        self.not_misses += 1
        cdef Handle made = self._node(
            a.var, self._neg_rec(a.low), self._neg_rec(a.high))
        self._not_cache[a.uid] = made
        return made

    def apply_binop(self, op, a, b):
        """Pointwise and/or/xor via Shannon expansion, memoized on uid pairs."""
        self._check_owned(a)
        self._check_owned(b)
        if op == "and":
            return self._and_rec(<Handle> a, <Handle> b)
        if op == "or":
            return self._or_rec(<Handle> a, <Handle> b)
        if op == "xor":
            return self._xor_rec(<Handle> a, <Handle> b)
        raise ValueError(f"unknown operation {op!r}")

    def conj(self, a, b):
        return self.apply_binop("and", a, b)

    def disj(self, a, b):
        return self.apply_binop("or", a, b)

    def xor(self, a, b):
        return self.apply_binop("xor", a, b)

    cdef Handle _and_rec(self, Handle a, Handle b):
        if a.uid == b.uid:
            return a
        if a.terminal == 0 or b.terminal == 0:
            return self.false
        if a.terminal == 1:
            return b
        if b.terminal == 1:
            return a
        key = (a.uid, b.uid)
        found = self._and_cache.get(key)
        if found is not None:
            self.and_hits += 1
            return <Handle> found
        self.and_misses += 1
        cdef int var
        cdef Handle a0, a1, b0, b1
        var = a.var if a.var < b.var else b.var
        if a.var == var:
            a0 = a.low; a1 = a.high
        else:
            a0 = a; a1 = a
        if b.var == var:
            b0 = b.low; b1 = b.high
        else:
            b0 = b; b1 = b
        cdef Handle made = self._node(var, self._and_rec(a0, b0), self._and_rec(a1, b1))
        self._and_cache[key] = made
        return made

    cdef Handle _or_rec(self, Handle a, Handle b):
        if a.uid == b.uid:
            return a
        if a.terminal == 1 or b.terminal == 1:
            return self.true
        if a.terminal == 0:
            return b
        if b.terminal == 0:
            return a
        key = (a.uid, b.uid)
        found = self._or_cache.get(key)
        if found is not None:
            self.or_hits += 1
            return <Handle> found
        self.or_misses += 1
        cdef int var
        cdef Handle a0, a1, b0, b1
        var = a.var if a.var < b.var else b.var
        if a.var == var:
            a0 = a.low; a1 = a.high
        else:
            a0 = a; a1 = a
        if b.var == var:
            b0 = b.low; b1 = b.high
        else:
            b0 = b; b1 = b
        cdef Handle made = self._node(var, self._or_rec(a0, b0), self._or_rec(a1, b1))
        self._or_cache[key] = made
        return made

    cdef Handle _xor_rec(self, Handle a, Handle b):
        if a.uid == b.uid:
            return self.false
        if a.terminal == 0:
            return b
        if b.terminal == 0:
            return a
        # xor against true is negation; the not-cache carries it
        if a.terminal == 1:
            return self._neg_rec(b)
        if b.terminal == 1:
            return self._neg_rec(a)
        key = (a.uid, b.uid)
        found = self._xor_cache.get(key)
        if found is not None:
            self.xor_hits += 1
            return <Handle> found
        self.xor_misses += 1
        cdef int var
        cdef Handle a0, a1, b0, b1
        var = a.var if a.var < b.var else b.var
        if a.var == var:
            a0 = a.low; a1 = a.high
        else:
            a0 = a; a1 = a
        if b.var == var:
            b0 = b.low; b1 = b.high
        else:
            b0 = b; b1 = b
        cdef Handle made = self._node(var, self._xor_rec(a0, b0), self._xor_rec(a1, b1))
        self._xor_cache[key] = made
        return made

    # -- equality and inspection ---------------------------------------

    def structural_eq(self, a, b):
        """Constant-time equality; equivalent to deep tree comparison."""
        self._check_owned(a)
        self._check_owned(b)
        return (<Handle> a).uid == (<Handle> b).uid

    def pool_size(self):
        """Live pool entries, the two leaves included."""
        return 2 + len(self._unique)

    def iter_pool(self):
        yield self.true
        yield self.false
        yield from list(self._unique.values())

    def stats(self):
        return {
            "intern_hits": self.intern_hits,
            "intern_misses": self.intern_misses,
            "not_hits": self.not_hits,
            "not_misses": self.not_misses,
            "and_hits": self.and_hits,
            "and_misses": self.and_misses,
            "or_hits": self.or_hits,
            "or_misses": self.or_misses,
            "xor_hits": self.xor_hits,
            "xor_misses": self.xor_misses,
        }

    def memo_entries(self):
        """Live cache tables, keyed by operation.  Read-only use."""
        return {
            "not": self._not_cache,
            "and": self._and_cache,
            "or": self._or_cache,
            "xor": self._xor_cache,
        }

    def clear_caches(self):
        """Drop all memo tables (the pool is untouched)."""
        self._not_cache.clear()
        self._and_cache.clear()
        self._or_cache.clear()
        self._xor_cache.clear()

    def reset_stats(self):
        self.intern_hits = self.intern_misses = 0
        self.not_hits = self.not_misses = 0
        self.and_hits = self.and_misses = 0
        self.or_hits = self.or_misses = 0
        self.xor_hits = self.xor_misses = 0

    def reset(self):
        """Empty the pool and caches; previously issued handles are dead."""
        self._tag = next(_manager_ids)
        self._unique.clear()
        self.clear_caches()
        self.reset_stats()
        self.true = _make_handle(1, 0, None, None, 1, self._tag)
        self.false = _make_handle(2, 0, None, None, 0, self._tag)
        self._next_uid = 3

    def _check_owned(self, h):
        if type(h) is not Handle:
            if hasattr(h, "tag") and hasattr(h, "uid"):
                raise ForeignHandle("handle belongs to a different manager")
            raise InvalidChild(f"not a handle: {h!r}")
        if (<Handle> h).tag != self._tag:
            raise ForeignHandle("handle belongs to a different manager")
