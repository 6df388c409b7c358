"""Expression evaluation over observation rows.

Two independent routes compute the same values: a scalar recursive walk
(``evaluate``) and a numpy-vectorized walk (``evaluate_batch``). Both enforce
strict non-finite propagation: once any subexpression goes non-finite, every
ancestor reports non-finite, even through saturating functions like clip01.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ArityError
from .functions import FUNCTIONS
from .nodes import Binary, Call, Constant, Expression, ExprNode, Param, Unary, Var


def _pow_scalar(base: float, exponent: float) -> float:
    if base < 0.0 and exponent != math.floor(exponent):
        return math.nan  # real-valued semantics only
    try:
        return float(base ** exponent)
    except OverflowError:
        if base < 0.0 and math.fmod(exponent, 2.0) == 1.0:
            return -math.inf
        return math.inf
    except ZeroDivisionError:
        return math.inf


def _div_scalar(num: float, den: float) -> float:
    try:
        return num / den
    except ZeroDivisionError:
        if num == 0.0:
            return math.nan
        return math.copysign(math.inf, num) * math.copysign(1.0, den)


def _eval_node(node: ExprNode, row, params) -> float:
    if isinstance(node, Constant):
        return node.value
    if isinstance(node, Param):
        return float(params[node.index])
    if isinstance(node, Var):
        return float(row[node.index])
    if isinstance(node, Unary):
        v = _eval_node(node.child, row, params)
        if not math.isfinite(v):
            return math.nan
        return -v
    if isinstance(node, Call):
        v = _eval_node(node.args[0], row, params)
        if not math.isfinite(v):
            return math.nan
        return float(FUNCTIONS[node.func][0](v))
    assert isinstance(node, Binary)
    left = _eval_node(node.left, row, params)
    if not math.isfinite(left):
        return math.nan
    right = _eval_node(node.right, row, params)
    if not math.isfinite(right):
        return math.nan
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        return _div_scalar(left, right)
    return _pow_scalar(left, right)


def evaluate(expr: Expression, row, params=()) -> float:
    """Evaluate one observation row; domain violations return a non-finite value."""
    row = tuple(row)
    params = tuple(params)
    if len(row) != len(expr.var_names):
        raise ArityError(f"row has {len(row)} values, expression expects {len(expr.var_names)}")
    if len(params) != expr.param_count:
        raise ArityError(
            f"got {len(params)} parameters, expression has {expr.param_count} slots"
        )
    return _eval_node(expr.root, row, params)


def _masked(result, *operands):
    ok = np.isfinite(operands[0])
    for other in operands[1:]:
        ok = ok & np.isfinite(other)
    return np.where(ok, result, np.nan)


def _eval_node_vec(node: ExprNode, X: np.ndarray, params) -> np.ndarray | float:
    if isinstance(node, Constant):
        return node.value
    if isinstance(node, Param):
        return float(params[node.index])
    if isinstance(node, Var):
        return X[:, node.index]
    with np.errstate(all="ignore"):
        if isinstance(node, Unary):
            v = _eval_node_vec(node.child, X, params)
            return _masked(np.negative(v), v)
        if isinstance(node, Call):
            v = _eval_node_vec(node.args[0], X, params)
            return _masked(FUNCTIONS[node.func][1](np.asarray(v, dtype=np.float64)), v)
        assert isinstance(node, Binary)
        left = _eval_node_vec(node.left, X, params)
        right = _eval_node_vec(node.right, X, params)
        if node.op == "+":
            out = np.add(left, right)
        elif node.op == "-":
            out = np.subtract(left, right)
        elif node.op == "*":
            out = np.multiply(left, right)
        elif node.op == "/":
            out = np.divide(left, right)
        else:
            out = np.power(left, right)
        return _masked(out, left, right)


def evaluate_batch(expr: Expression, data, params=()) -> np.ndarray:
    """Vectorized evaluation over all rows of a dataset or (n, arity) array."""
    X = data.X if hasattr(data, "X") else np.asarray(data, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != len(expr.var_names):
        raise ArityError(
            f"data has shape {X.shape}, expression expects (n, {len(expr.var_names)})"
        )
    params = tuple(params)
    if len(params) != expr.param_count:
        raise ArityError(
            f"got {len(params)} parameters, expression has {expr.param_count} slots"
        )
    out = _eval_node_vec(expr.root, X, params)
    return np.broadcast_to(np.asarray(out, dtype=np.float64), (X.shape[0],)).copy()
