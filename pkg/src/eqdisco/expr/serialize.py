"""Canonical text form of expressions: deterministic, minimal parentheses.

This is the wire format for prompts, logs, and checkpoints;
``parse(serialize(e))`` reproduces the tree exactly for canonical trees
(parser output, or trees built with the ``neg`` constructor).
"""

from __future__ import annotations

from .nodes import Binary, Call, Constant, Expression, ExprNode, Param, Unary, Var

# binding strength; parentheses are emitted when a child binds looser than
# its context requires
_LEVEL_ADD = 1
_LEVEL_MUL = 2
_LEVEL_NEG = 3
_LEVEL_POW = 4
_LEVEL_ATOM = 5

_BIN_LEVEL = {"+": _LEVEL_ADD, "-": _LEVEL_ADD, "*": _LEVEL_MUL, "/": _LEVEL_MUL,
              "^": _LEVEL_POW}


def _level(node: ExprNode) -> int:
    if isinstance(node, Binary):
        return _BIN_LEVEL[node.op]
    if isinstance(node, Unary):
        return _LEVEL_NEG
    if isinstance(node, Constant) and node.value < 0:
        # leading minus sign binds like unary negation
        return _LEVEL_NEG
    return _LEVEL_ATOM


def _wrap(text: str, node: ExprNode, min_level: int) -> str:
    return f"({text})" if _level(node) < min_level else text


def _emit(node: ExprNode, var_names: tuple[str, ...]) -> str:
    if isinstance(node, Constant):
        return repr(node.value)
    if isinstance(node, Param):
        return f"p{node.index}"
    if isinstance(node, Var):
        return var_names[node.index]
    if isinstance(node, Unary):
        child = _wrap(_emit(node.child, var_names), node.child, _LEVEL_NEG)
        return f"-{child}"
    if isinstance(node, Call):
        return f"{node.func}({_emit(node.args[0], var_names)})"
    assert isinstance(node, Binary)
    if node.op == "^":
        # right-associative; the exponent slot re-parses anything down to a
        # unary minus without parentheses
        left = _wrap(_emit(node.left, var_names), node.left, _LEVEL_POW + 1)
        right = _wrap(_emit(node.right, var_names), node.right, _LEVEL_NEG)
        return f"{left}^{right}"
    level = _BIN_LEVEL[node.op]
    left = _wrap(_emit(node.left, var_names), node.left, level)
    right = _wrap(_emit(node.right, var_names), node.right, level + 1)
    return f"{left} {node.op} {right}"


def serialize(expr: Expression) -> str:
    """Deterministic canonical text of the expression."""
    return _emit(expr.root, expr.var_names)
