"""Expression grammar: node types, parsing, canonical text, and evaluation."""

from .evaluate import evaluate, evaluate_batch
from .functions import FUNCTIONS, FUNCTION_NAMES, gamma
from .nodes import (
    Binary,
    Call,
    Constant,
    Expression,
    ExprNode,
    Param,
    Unary,
    Var,
    count_params,
    depth,
    make_expression,
    neg,
)
from .parser import parse, parses_syntactically
from .randgen import random_expression, random_node
from .serialize import serialize

__all__ = [
    "Binary", "Call", "Constant", "Expression", "ExprNode", "Param", "Unary", "Var",
    "FUNCTIONS", "FUNCTION_NAMES", "gamma",
    "count_params", "depth", "evaluate", "evaluate_batch", "make_expression", "neg",
    "parse", "parses_syntactically", "random_expression", "random_node", "serialize",
]
