import numpy as np
import pytest

from eqdisco.errors import ParseError, ValidationError
from eqdisco.expr import (
    Binary,
    Call,
    Constant,
    Param,
    Unary,
    Var,
    parse,
    random_expression,
    serialize,
)
from eqdisco.problem import ProblemSpec


def test_parse_linear(spec_x):
    e = parse("p0 * x + p1", spec_x)
    assert e.root == Binary("+", Binary("*", Param(0), Var(0)), Param(1))
    assert e.param_count == 2


def test_parse_single_leaf(spec_x):
    e = parse("x", spec_x)
    assert e.root == Var(0)
    assert e.depth == 1


def test_unknown_variable_rejected(spec_x):
    with pytest.raises(ValidationError):
        parse("sin(y)", spec_x)


def test_unknown_function_rejected(spec_x):
    with pytest.raises(ValidationError):
        parse("sinh(x)", spec_x)


@pytest.mark.parametrize("text", ["", "x +", "(x", "x ) ", "1..2", "x @ 2", "sin(x, x)"])
def test_malformed_text_raises_with_position(spec_x, text):
    with pytest.raises(ParseError) as err:
        parse(text, spec_x)
    assert err.value.position >= 0


def test_precedence_pow_over_unary_minus(spec_x):
    # ^ binds tighter than unary minus, which binds tighter than *
    e = parse("-x^2", spec_x)
    assert e.root == Unary("neg", Binary("^", Var(0), Constant(2.0)))
    e = parse("-x*x", spec_x)
    assert e.root == Binary("*", Unary("neg", Var(0)), Var(0))


def test_pow_right_associative(spec_x):
    e = parse("x^2^3", spec_x)
    assert e.root == Binary("^", Var(0), Binary("^", Constant(2.0), Constant(3.0)))


def test_negative_literal_folds_to_constant(spec_x):
    assert parse("-3.5", spec_x).root == Constant(-3.5)
    assert parse("x - -2", spec_x).root == Binary("-", Var(0), Constant(-2.0))


def test_scientific_notation(spec_x):
    assert parse("1e-5", spec_x).root == Constant(1e-5)
    assert parse("2.5E+3 * x", spec_x).root == Binary("*", Constant(2500.0), Var(0))


def test_param_reindexing(spec_x):
    e = parse("p5 * x + p2", spec_x)
    assert e.root == Binary("+", Binary("*", Param(0), Var(0)), Param(1))
    assert e.param_count == 2


def test_shared_param_slot(spec_x):
    e = parse("p0*x + p0", spec_x)
    assert e.param_count == 1


def test_promote_literals(spec_x):
    e = parse("2*x + 1", spec_x, promote_literals=True)
    assert e.param_count == 2
    assert e.root == Binary("+", Binary("*", Param(0), Var(0)), Param(1))


def test_redundant_parens_abstracted(spec_x):
    assert parse("((x))", spec_x) == parse("x", spec_x)
    assert parse("(p0*x) + (p1)", spec_x) == parse("p0*x + p1", spec_x)


def test_serialize_trivial_forms(spec_x):
    from eqdisco.expr import make_expression

    e = make_expression(Binary("+", Var(0), Param(0)), ("x",))
    assert serialize(e) == "x + p0"
    e = make_expression(Unary("neg", Var(0)), ("x",))
    assert serialize(e) == "-x"


def test_serialize_minimal_parens(spec_xy):
    cases = [
        "x - (y - 1.0)",
        "x / (y * x)",
        "(x + y)^2.0",
        "(-x)^2.0",
        "x^-2.0",
        "-(x + y)",
        "sin(x + y)",
    ]
    for text in cases:
        e = parse(text, spec_xy)
        assert parse(serialize(e), spec_xy) == e, text


def test_round_trip_1000_random_trees(spec_xy):
    rng = np.random.default_rng(7)
    for _ in range(1000):
        e = random_expression(rng, spec_xy.var_names, max_depth=6, param_pool=3)
        text = serialize(e)
        again = parse(text, spec_xy)
        assert again == e, text


def test_var_name_collisions_rejected():
    with pytest.raises(ValidationError):
        ProblemSpec(name="bad", var_names=("p0",))
    with pytest.raises(ValidationError):
        ProblemSpec(name="bad", var_names=("sin",))
