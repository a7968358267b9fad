"""Shared domain types for the BDD backends.

Both backends represent boolean functions as reduced ordered binary
decision diagrams over 1-based integer variables.  The variable order is
the natural order on indices: smaller index closer to the root, so every
decision node's children are labeled with strictly larger variables (or
are leaves).  A node whose two branches are equal is never materialized.

This module owns the value types (node references, decision-node triples,
the formula AST) and the error hierarchy; it knows nothing about either
backend's state representation.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Union


class BddError(Exception):
    """Base class for all errors raised by this package."""


class InvalidChild(BddError):
    """A child reference points at an identifier the store has not allocated."""


class OrderViolation(BddError):
    """A child's variable index is not strictly larger than its parent's."""


class OutOfFuel(BddError):
    """The recursion budget was exhausted before the operation finished."""


class DanglingRef(BddError):
    """A node identifier has no entry in the store's graph."""


class ForeignHandle(BddError):
    """A handle from one manager was passed to a different manager."""


class VarOutOfRange(BddError):
    """A variable index is outside the permitted range."""


class ArityMismatch(BddError):
    """Two truth tables with different variable counts were compared."""


class Leaf(enum.Enum):
    """Terminal node: the constant true or false function."""

    TRUE = "T"
    FALSE = "F"

    def __bool__(self) -> bool:
        return self is Leaf.TRUE

    def __repr__(self) -> str:
        return f"Leaf.{self.name}"


LEAF_TRUE = Leaf.TRUE
LEAF_FALSE = Leaf.FALSE

# A reference to a BDD expression: a leaf, or the positive integer id of a
# decision node inside some store.
NodeRef = Union[Leaf, int]

# A total valuation of the variables consulted during evaluation.
Assignment = Mapping[int, bool]


def is_leaf(ref: NodeRef) -> bool:
    return isinstance(ref, Leaf)


def leaf_of(value: bool) -> Leaf:
    return Leaf.TRUE if value else Leaf.FALSE


def check_var(index: int) -> int:
    """Validate a 1-based variable index, returning it unchanged."""
    if not isinstance(index, int) or isinstance(index, bool) or index < 1:
        raise VarOutOfRange(f"variable index must be a positive integer, got {index!r}")
    return index


def check_ref(ref: NodeRef) -> NodeRef:
    """Validate the shape of a node reference (leaf, or positive id)."""
    if isinstance(ref, Leaf):
        return ref
    if isinstance(ref, int) and not isinstance(ref, bool) and ref >= 1:
        return ref
    raise InvalidChild(f"not a node reference: {ref!r}")


class Node(NamedTuple):
    """Decision-node triple: 0-branch, variable, 1-branch.

    The branches are ``NodeRef`` values.  A well-formed node is reduced
    (``low != high``) and ordered (inner children have larger variables),
    but the type itself does not enforce this; backend validators do.
    """

    low: NodeRef
    var: int
    high: NodeRef


def node_should_collapse(low: NodeRef, high: NodeRef) -> bool:
    """True iff a node with these branches must not be built.

    A decision node whose branches are equal denotes the same function as
    either branch, so constructors return the branch instead.
    """
    return low == high


# ---------------------------------------------------------------------------
# Formula AST


class Formula:
    """Boolean expression over variables ``x1, x2, ...``.

    Connectives are provided both as constructors (`Not`, `And`, `Or`,
    `Xor`) and as operators (``~``, ``&``, ``|``, ``^``) for readable
    formula-building code.
    """

    __slots__ = ()

    def __invert__(self) -> "Formula":
        return Not(self)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __xor__(self, other: "Formula") -> "Formula":
        return Xor(self, other)


@dataclass(frozen=True, slots=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True, slots=True)
class Ref(Formula):
    var: int

    def __post_init__(self) -> None:
        check_var(self.var)


@dataclass(frozen=True, slots=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Xor(Formula):
    left: Formula
    right: Formula


TRUE = Const(True)
FALSE = Const(False)


def var(index: int) -> Ref:
    """The formula consisting of the single variable ``x<index>``."""
    return Ref(index)


def eval_formula(f: Formula, a: Assignment) -> bool:
    """Evaluate a formula under one assignment by direct recursion."""
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Ref):
        return bool(a[f.var])
    if isinstance(f, Not):
        return not eval_formula(f.arg, a)
    if isinstance(f, And):
        return eval_formula(f.left, a) and eval_formula(f.right, a)
    if isinstance(f, Or):
        return eval_formula(f.left, a) or eval_formula(f.right, a)
    if isinstance(f, Xor):
        return eval_formula(f.left, a) != eval_formula(f.right, a)
    raise TypeError(f"not a formula: {f!r}")


def formula_max_var(f: Formula) -> int:
    """Largest variable index appearing in ``f`` (0 if none)."""
    if isinstance(f, Const):
        return 0
    if isinstance(f, Ref):
        return f.var
    if isinstance(f, Not):
        return formula_max_var(f.arg)
    if isinstance(f, (And, Or, Xor)):
        return max(formula_max_var(f.left), formula_max_var(f.right))
    raise TypeError(f"not a formula: {f!r}")


def formula_size(f: Formula) -> int:
    """Number of AST nodes in ``f``."""
    if isinstance(f, (Const, Ref)):
        return 1
    if isinstance(f, Not):
        return 1 + formula_size(f.arg)
    if isinstance(f, (And, Or, Xor)):
        return 1 + formula_size(f.left) + formula_size(f.right)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Validation reports


@dataclass(frozen=True)
class Violation:
    """One broken invariant, with a witness for debugging."""

    code: str
    message: str


@dataclass
class ValidationReport:
    """Outcome of a backend validator run.  Violations are data, not errors."""

    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str) -> None:
        self.violations.append(Violation(code, message))

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        lines = [f"{len(self.violations)} violation(s):"]
        lines += [f"  [{v.code}] {v.message}" for v in self.violations]
        return "\n".join(lines)
