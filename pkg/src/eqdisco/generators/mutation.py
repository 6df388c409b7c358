"""Deterministic mutation backend: a seeded stand-in for the reasoning calls.

It reproduces the discovery loop's information flow (local state, shared best
equation, residual direction) with a metaheuristic edit set instead of model
reasoning, which makes runs reproducible enough to serve as the offline
oracle for tests.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParseError, ValidationError
from ..expr import (
    Binary,
    Call,
    Expression,
    FUNCTION_NAMES,
    Param,
    Unary,
    Var,
    make_expression,
    parse,
    random_node,
    serialize,
)
from ..expr.nodes import ExprNode, children, node_depth, param_indices
from ..expr.parser import parse_free
from ..problem import Hypothesis, ProblemSpec

OVERESTIMATION = "overestimation"
UNDERESTIMATION = "underestimation"


def _paths(node: ExprNode, prefix: tuple = ()):
    yield prefix, node
    for i, child in enumerate(children(node)):
        yield from _paths(child, prefix + (i,))


def _replace(node: ExprNode, path: tuple, new: ExprNode) -> ExprNode:
    if not path:
        return new
    i = path[0]
    if isinstance(node, Unary):
        return Unary(node.op, _replace(node.child, path[1:], new))
    if isinstance(node, Binary):
        if i == 0:
            return Binary(node.op, _replace(node.left, path[1:], new), node.right)
        return Binary(node.op, node.left, _replace(node.right, path[1:], new))
    if isinstance(node, Call):
        args = list(node.args)
        args[i] = _replace(args[i], path[1:], new)
        return Call(node.func, tuple(args))
    raise ValueError("path descends into a leaf")


def _pick(rng: np.random.Generator, items: list):
    return items[int(rng.integers(len(items)))]


def _apply_edit(edit: str, expr: Expression, ck, direction: str,
                rng: np.random.Generator) -> ExprNode | None:
    """One structural edit; None when the edit does not apply to this tree."""
    root = expr.root
    n_vars = len(expr.var_names)
    paths = list(_paths(root))

    if edit == "replace":
        path, _ = _pick(rng, paths)
        return _replace(root, path, random_node(rng, n_vars, max_depth=3))

    if edit == "crossover":
        if ck is None:
            return None
        try:
            elite = parse(ck.f_best_text, _SpecView(expr.var_names))
        except (ParseError, ValidationError):
            return None
        _, graft = _pick(rng, list(_paths(elite.root)))
        path, _ = _pick(rng, paths)
        return _replace(root, path, graft)

    if edit == "wrap":
        if rng.random() < 0.5:
            path, target = _pick(rng, paths)
            fn = _pick(rng, list(FUNCTION_NAMES))
            return _replace(root, path, Call(fn, (target,)))
        wrapped = [(p, n) for p, n in paths if isinstance(n, (Call, Unary))]
        if not wrapped:
            return None
        path, target = _pick(rng, wrapped)
        inner = target.args[0] if isinstance(target, Call) else target.child
        return _replace(root, path, inner)

    if edit == "param":
        path, target = _pick(rng, paths)
        fresh = Param(max(param_indices(root), default=-1) + 1)
        favored = "-" if direction == OVERESTIMATION else "+"
        other = "+" if favored == "-" else "-"
        form = _pick(rng, ["*", favored, favored, other])
        if form == "*":
            new = Binary("*", fresh, target)
        else:
            new = Binary(form, target, fresh)
        return _replace(root, path, new)

    if edit == "prune":
        internal = [(p, n) for p, n in paths if children(n)]
        if not internal:
            return None
        path, target = _pick(rng, internal)
        kid = _pick(rng, list(children(target)))
        return _replace(root, path, kid)

    raise ValueError(f"unknown edit {edit!r}")


class _SpecView:
    """Minimal schema view so parse() can validate against an expression's variables."""

    def __init__(self, var_names):
        self.var_names = tuple(var_names)


def mutate(expr: Expression, ck, direction: str, rng: np.random.Generator) -> Expression:
    """One seeded structural edit of the expression.

    Crossover with the shared best equation is drawn with double weight when
    collective knowledge is present; invalid outcomes are re-drawn up to 10
    times before returning the input unchanged.
    """
    edits = ["replace", "wrap", "param", "prune"]
    weights = [1.0, 1.0, 1.0, 1.0]
    if ck is not None:
        edits.append("crossover")
        weights.append(2.0)
    p = np.array(weights) / sum(weights)
    for _ in range(10):
        edit = edits[int(rng.choice(len(edits), p=p))]
        root = _apply_edit(edit, expr, ck, direction, rng)
        if root is None:
            continue
        try:
            return make_expression(root, expr.var_names)
        except ValidationError:
            continue
    return expr


class MutationGenerator:
    """Seeded generation backend; randomness keys on (seed, agent, iteration)."""

    max_concurrent = 1

    def __init__(self, seed: int):
        self.seed = int(seed)

    def _stream(self, agent_id: int, iteration: int) -> np.random.Generator:
        return np.random.default_rng(
            np.random.SeedSequence([self.seed, int(agent_id), int(iteration)])
        )

    def initial(self, spec: ProblemSpec, hyp: Hypothesis, agent_id: int = 0,
                feedback: str | None = None) -> str:
        rng = self._stream(agent_id, 0)
        try:
            base = parse(hyp.expression_text(), spec)
        except (ParseError, ValidationError):
            base = make_expression(random_node(rng, spec.arity, max_depth=3),
                                   spec.var_names)
        return serialize(mutate(base, None, UNDERESTIMATION, rng))

    def revise(self, state, ck, direction: str, feedback: str | None = None) -> str:
        rng = self._stream(state.agent_id, state.history_len + 1)
        return serialize(mutate(state.expr, ck, direction, rng))

    def health(self) -> bool:
        return True


def analyze_stub(f_best_text: str, domain_tag: str) -> str:
    """Deterministic structural summary standing in for model analysis."""
    expr = parse_free(f_best_text)
    census: dict[str, int] = {}
    for _, node in _paths(expr.root):
        if isinstance(node, Binary):
            key = node.op
        elif isinstance(node, Unary):
            key = "neg"
        elif isinstance(node, Call):
            key = node.func
        else:
            continue
        census[key] = census.get(key, 0) + 1
    used_vars = sorted(
        {expr.var_names[n.index] for _, n in _paths(expr.root) if isinstance(n, Var)}
    )
    ops = ", ".join(f"{k}:{census[k]}" for k in sorted(census)) or "none"
    d = node_depth(expr.root)
    return (
        f"[{domain_tag}] structural reading of `{f_best_text}`: "
        f"depth={d}, params={expr.param_count}, "
        f"vars={','.join(used_vars) if used_vars else 'none'}, ops={{{ops}}}. "
        f"Compactness figure: 1/depth = {1.0 / d:.4g}."
    )


class StructuralAnalyst:
    """Deterministic analysis backend built on analyze_stub."""

    def analyze(self, f_best_text: str, domain_tag: str) -> str:
        return analyze_stub(f_best_text, domain_tag)
