"""Seeded random expression trees, used by property tests and the mutation backend."""

from __future__ import annotations

import numpy as np

from .functions import FUNCTION_NAMES
from .nodes import Binary, Call, Constant, Expression, ExprNode, Param, Var, make_expression, neg

_BIN_CHOICES = ("+", "-", "*", "/", "^")


def random_node(rng: np.random.Generator, n_vars: int, max_depth: int,
                param_pool: int = 0) -> ExprNode:
    """One random canonical subtree of depth <= max_depth.

    param_pool > 0 allows Param leaves with indices drawn from [0, param_pool);
    callers re-index through make_expression afterwards.
    """
    if max_depth <= 1 or rng.random() < 0.3:
        kind = rng.random()
        if kind < 0.5:
            return Var(int(rng.integers(n_vars)))
        if kind < 0.8 or param_pool == 0:
            return Constant(float(np.round(rng.uniform(-5.0, 5.0), 4)))
        return Param(int(rng.integers(param_pool)))
    kind = rng.random()
    if kind < 0.55:
        op = _BIN_CHOICES[int(rng.integers(len(_BIN_CHOICES)))]
        left = random_node(rng, n_vars, max_depth - 1, param_pool)
        right = random_node(rng, n_vars, max_depth - 1, param_pool)
        return Binary(op, left, right)
    if kind < 0.85:
        fn = FUNCTION_NAMES[int(rng.integers(len(FUNCTION_NAMES)))]
        return Call(fn, (random_node(rng, n_vars, max_depth - 1, param_pool),))
    return neg(random_node(rng, n_vars, max_depth - 1, param_pool))


def random_expression(rng: np.random.Generator, var_names, max_depth: int = 5,
                      param_pool: int = 3) -> Expression:
    """A validated random Expression with contiguous parameter slots."""
    var_names = tuple(var_names)
    root = random_node(rng, len(var_names), max_depth, param_pool)
    return make_expression(root, var_names)
