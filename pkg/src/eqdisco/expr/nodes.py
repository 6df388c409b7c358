"""Expression tree node types and structural queries (depth, parameter count)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Union

from ..errors import ValidationError
from .functions import FUNCTIONS

BINARY_OPS = ("+", "-", "*", "/", "^")


@dataclass(frozen=True)
class Constant:
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))


@dataclass(frozen=True)
class Param:
    index: int


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Unary:
    op: str  # only "neg"
    child: "ExprNode"


@dataclass(frozen=True)
class Binary:
    op: str  # one of BINARY_OPS
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Call:
    func: str  # key into FUNCTIONS
    args: tuple["ExprNode", ...]


ExprNode = Union[Constant, Param, Var, Unary, Binary, Call]


def neg(child: ExprNode) -> ExprNode:
    """Canonical negation: folds onto constants so -3 is a single leaf."""
    if isinstance(child, Constant):
        return Constant(-child.value)
    return Unary("neg", child)


def children(node: ExprNode) -> tuple[ExprNode, ...]:
    if isinstance(node, Unary):
        return (node.child,)
    if isinstance(node, Binary):
        return (node.left, node.right)
    if isinstance(node, Call):
        return node.args
    return ()


def iter_nodes(node: ExprNode) -> Iterator[ExprNode]:
    """Preorder traversal."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(children(n)))


def node_depth(node: ExprNode) -> int:
    """Nodes on the longest root-to-leaf path; a single leaf has depth 1."""
    kids = children(node)
    if not kids:
        return 1
    return 1 + max(node_depth(k) for k in kids)


def param_indices(node: ExprNode) -> list[int]:
    """Distinct parameter slot indices in first-appearance (preorder) order."""
    seen: list[int] = []
    for n in iter_nodes(node):
        if isinstance(n, Param) and n.index not in seen:
            seen.append(n.index)
    return seen


def reindex_params(node: ExprNode) -> tuple[ExprNode, int]:
    """Renumber parameter slots to the contiguous range 0..M-1 (preorder order)."""
    order = param_indices(node)
    mapping = {old: new for new, old in enumerate(order)}

    def rebuild(n: ExprNode) -> ExprNode:
        if isinstance(n, Param):
            return Param(mapping[n.index])
        if isinstance(n, Unary):
            return Unary(n.op, rebuild(n.child))
        if isinstance(n, Binary):
            return Binary(n.op, rebuild(n.left), rebuild(n.right))
        if isinstance(n, Call):
            return Call(n.func, tuple(rebuild(a) for a in n.args))
        return n

    if mapping == {i: i for i in mapping}:
        return node, len(order)
    return rebuild(node), len(order)


def validate_node(node: ExprNode, arity: int) -> None:
    """Check variable indices, call arities, operator names, and finite constants."""
    for n in iter_nodes(node):
        if isinstance(n, Constant):
            if not math.isfinite(n.value):
                raise ValidationError(f"non-finite constant {n.value!r}")
        elif isinstance(n, Param):
            if n.index < 0:
                raise ValidationError(f"negative parameter index {n.index}")
        elif isinstance(n, Var):
            if not (0 <= n.index < arity):
                raise ValidationError(
                    f"variable index {n.index} out of range for arity {arity}"
                )
        elif isinstance(n, Unary):
            if n.op != "neg":
                raise ValidationError(f"unknown unary operator {n.op!r}")
        elif isinstance(n, Binary):
            if n.op not in BINARY_OPS:
                raise ValidationError(f"unknown binary operator {n.op!r}")
        elif isinstance(n, Call):
            if n.func not in FUNCTIONS:
                raise ValidationError(f"unknown function {n.func!r}")
            if len(n.args) != 1:
                raise ValidationError(f"{n.func} takes 1 argument, got {len(n.args)}")


@dataclass(frozen=True, eq=True)
class Expression:
    """A validated expression tree bound to an ordered variable schema.

    ``param_count`` is the number of distinct learnable slots (the complexity
    term M in the discovery score); structural equality ignores source_text.
    """

    root: ExprNode
    var_names: tuple[str, ...]
    param_count: int
    source_text: str = ""

    def __post_init__(self):
        object.__setattr__(self, "var_names", tuple(self.var_names))

    def __eq__(self, other):
        if not isinstance(other, Expression):
            return NotImplemented
        return (
            self.root == other.root
            and self.var_names == other.var_names
            and self.param_count == other.param_count
        )

    def __hash__(self):
        return hash((self.root, self.var_names, self.param_count))

    @property
    def depth(self) -> int:
        return node_depth(self.root)

    @property
    def text(self) -> str:
        from .serialize import serialize  # local import: serialize needs node types

        return serialize(self)


def make_expression(root: ExprNode, var_names, source_text: str = "") -> Expression:
    """Validate, renumber parameter slots, and wrap a raw tree."""
    var_names = tuple(var_names)
    validate_node(root, len(var_names))
    root, count = reindex_params(root)
    indices = param_indices(root)
    if indices != list(range(count)):
        raise ValidationError(f"parameter indices not contiguous: {indices}")
    return Expression(root=root, var_names=var_names, param_count=count,
                      source_text=source_text)


def count_params(expr: Expression) -> int:
    """Distinct parameter slots in the expression."""
    return expr.param_count


def depth(expr: Expression) -> int:
    """Longest root-to-leaf node count of the expression tree."""
    return node_depth(expr.root)
