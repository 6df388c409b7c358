"""Recursive-descent parser for the expression grammar.

Grammar (highest binding last):
    expr   := term  (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?        # right-associative
    atom   := NUMBER | pN | VAR | FUNC '(' expr ')' | '(' expr ')'

Parameter tokens are ``p0, p1, ...``; bare numeric literals are fixed
constants unless ``promote_literals`` is set, which turns each literal into a
fresh learnable slot. Parsing is reentrant and keeps no global state.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING

from ..errors import ParseError, ValidationError
from .functions import FUNCTIONS
from .nodes import (
    Binary,
    Call,
    Constant,
    Expression,
    ExprNode,
    Param,
    Var,
    make_expression,
    neg,
)

if TYPE_CHECKING:
    from ..problem import ProblemSpec

_TOKEN_RE = re.compile(
    r"""
    (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
  | (?P<ws>\s+)
    """,
    re.VERBOSE,
)

_PARAM_RE = re.compile(r"^p(\d+)$")


@dataclass(frozen=True)
class _Token:
    kind: str  # "num" | "ident" | "op" | "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, var_names: tuple[str, ...] | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.var_names = var_names
        self.free_vars: list[str] = []  # collected in permissive mode

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def eat(self, text: str | None = None) -> _Token:
        tok = self.cur
        if text is not None and tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.pos)
        self.i += 1
        return tok

    def parse(self) -> ExprNode:
        node = self.expr()
        if self.cur.kind != "end":
            raise ParseError(f"unexpected trailing {self.cur.text!r}", self.cur.pos)
        return node

    def expr(self) -> ExprNode:
        node = self.term()
        while self.cur.text in ("+", "-"):
            op = self.eat().text
            node = Binary(op, node, self.term())
        return node

    def term(self) -> ExprNode:
        node = self.unary()
        while self.cur.text in ("*", "/"):
            op = self.eat().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> ExprNode:
        if self.cur.text == "-":
            self.eat()
            return neg(self.unary())
        return self.power()

    def power(self) -> ExprNode:
        node = self.atom()
        if self.cur.text == "^":
            self.eat()
            node = Binary("^", node, self.unary())
        return node

    def atom(self) -> ExprNode:
        tok = self.cur
        if tok.kind == "num":
            self.eat()
            return Constant(float(tok.text))
        if tok.kind == "ident":
            self.eat()
            if self.cur.text == "(":
                if tok.text not in FUNCTIONS:
                    raise ValidationError(f"unknown function {tok.text!r}")
                self.eat("(")
                arg = self.expr()
                self.eat(")")
                return Call(tok.text, (arg,))
            return self.name(tok)
        if tok.text == "(":
            self.eat("(")
            node = self.expr()
            self.eat(")")
            return node
        raise ParseError(f"expected a value, found {tok.text!r}" if tok.kind != "end"
                         else "unexpected end of expression", tok.pos)

    def name(self, tok: _Token) -> ExprNode:
        m = _PARAM_RE.match(tok.text)
        if m:
            return Param(int(m.group(1)))
        if self.var_names is None:
            if tok.text not in self.free_vars:
                self.free_vars.append(tok.text)
            return Var(self.free_vars.index(tok.text))
        if tok.text not in self.var_names:
            raise ValidationError(
                f"unknown variable {tok.text!r}; expected one of {list(self.var_names)}"
            )
        return Var(self.var_names.index(tok.text))


def _promote_literals(node: ExprNode, next_index: list[int]) -> ExprNode:
    if isinstance(node, Constant):
        p = Param(next_index[0])
        next_index[0] += 1
        return p
    if isinstance(node, Binary):
        return Binary(node.op, _promote_literals(node.left, next_index),
                      _promote_literals(node.right, next_index))
    if isinstance(node, Call):
        return Call(node.func, tuple(_promote_literals(a, next_index) for a in node.args))
    from .nodes import Unary

    if isinstance(node, Unary):
        return Unary(node.op, _promote_literals(node.child, next_index))
    return node


def parse(text: str, spec: "ProblemSpec", promote_literals: bool = False) -> Expression:
    """Parse text into a validated Expression against the spec's variable schema.

    Raises ParseError on malformed text and ValidationError on unknown
    identifiers or arity faults. Parameter slots are renumbered to 0..M-1.
    """
    root = _Parser(text, tuple(spec.var_names)).parse()
    if promote_literals:
        from .nodes import param_indices

        start = [max(param_indices(root), default=-1) + 1]
        root = _promote_literals(root, start)
    return make_expression(root, spec.var_names, source_text=text)


def parses_syntactically(text: str) -> bool:
    """True if text is grammatical, treating any unknown identifier as a variable."""
    try:
        parse_free(text)
        return True
    except (ParseError, ValidationError):
        return False


def parse_free(text: str) -> Expression:
    """Parse without a schema; free identifiers become variables in appearance order."""
    parser = _Parser(text, None)
    root = parser.parse()
    return make_expression(root, tuple(parser.free_vars) or ("x",), source_text=text)
