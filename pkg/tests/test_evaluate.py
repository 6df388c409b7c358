import math

import numpy as np
import pytest

from eqdisco.errors import ArityError
from eqdisco.expr import evaluate, evaluate_batch, parse, random_expression
from eqdisco.problem import ProblemSpec


def test_linear_arithmetic(spec_x):
    e = parse("p0 * x + p1", spec_x)
    assert evaluate(e, [3], [2, 1]) == 7.0


def test_log_domain_violation_is_nonfinite(spec_x):
    e = parse("log(x)", spec_x)
    assert not math.isfinite(evaluate(e, [-1.0]))


def test_gamma_factorial_value(spec_x):
    e = parse("gamma(x)", spec_x)
    assert evaluate(e, [5.0]) == pytest.approx(24.0, rel=1e-12)


def test_arity_errors(spec_x):
    e = parse("p0 * x", spec_x)
    with pytest.raises(ArityError):
        evaluate(e, [1.0, 2.0], [1.0])
    with pytest.raises(ArityError):
        evaluate(e, [1.0], [])
    with pytest.raises(ArityError):
        evaluate_batch(e, np.zeros((3, 2)), [1.0])


def test_batch_identity(spec_x):
    e = parse("x", spec_x)
    out = evaluate_batch(e, np.array([[1.0], [2.0], [3.0]]))
    assert out.tolist() == [1.0, 2.0, 3.0]


def test_batch_empty_dataset(spec_x):
    e = parse("p0 * x", spec_x)
    out = evaluate_batch(e, np.zeros((0, 1)), [2.0])
    assert out.shape == (0,)


def test_batch_constant_expression_broadcasts(spec_x):
    e = parse("p0", spec_x)
    out = evaluate_batch(e, np.zeros((4, 1)), [3.0])
    assert out.tolist() == [3.0] * 4


@pytest.mark.parametrize("text,row,expected", [
    ("x / 0.0", [1.0], None),          # non-finite, value unspecified
    ("0.0 / 0.0", [1.0], None),
    ("sqrt(x)", [-4.0], None),
    ("x^0.5", [-2.0], None),           # negative base, fractional exponent
    ("x^-1.0", [0.0], None),
    ("exp(x)", [1000.0], None),        # overflow
    ("gamma(x)", [0.0], None),
    ("gamma(x)", [-3.0], None),
])
def test_domain_violations_go_nonfinite(spec_x, text, row, expected):
    e = parse(text, spec_x)
    assert not math.isfinite(evaluate(e, row))


def test_nonfinite_propagates_through_saturating_functions(spec_x):
    # clip01 and sigmoid would otherwise hide an upstream explosion
    for text in ["clip01(exp(x))", "sigmoid(exp(x))", "1.0 / exp(x)", "tanh(exp(x))"]:
        e = parse(text, spec_x)
        assert not math.isfinite(evaluate(e, [1000.0])), text
        batch = evaluate_batch(e, np.array([[1000.0]]))
        assert not np.isfinite(batch[0]), text


def test_purity_bit_identical(spec_xy):
    rng = np.random.default_rng(3)
    e = random_expression(rng, spec_xy.var_names, max_depth=5, param_pool=2)
    row = [0.7, -1.3]
    params = [0.5] * e.param_count
    a = evaluate(e, row, params)
    b = evaluate(e, row, params)
    assert a == b or (math.isnan(a) and math.isnan(b))


def test_batch_matches_scalar_on_random_pairs(spec_xy):
    """Vectorized evaluation agrees with the per-row scalar oracle.

    Scalar libm and numpy's vectorized kernels may differ in the last ulp on
    transcendentals, hence the tight-but-not-zero tolerance; finiteness must
    agree exactly.
    """
    rng = np.random.default_rng(11)
    for _ in range(100):
        e = random_expression(rng, spec_xy.var_names, max_depth=5, param_pool=2)
        X = rng.uniform(-3.0, 3.0, size=(17, 2))
        params = rng.uniform(-2.0, 2.0, size=e.param_count)
        batch = evaluate_batch(e, X, params)
        scalar = np.array([evaluate(e, X[i], params) for i in range(len(X))])
        finite_b, finite_s = np.isfinite(batch), np.isfinite(scalar)
        assert np.array_equal(finite_b, finite_s), e.text
        if finite_b.any():
            np.testing.assert_allclose(batch[finite_b], scalar[finite_s],
                                       rtol=1e-10, atol=0.0)


def test_sigmoid_and_clip01(spec_x):
    assert evaluate(parse("sigmoid(x)", spec_x), [0.0]) == 0.5
    assert evaluate(parse("clip01(x)", spec_x), [2.0]) == 1.0
    assert evaluate(parse("clip01(x)", spec_x), [-2.0]) == 0.0
    assert evaluate(parse("sigmoid(x)", spec_x), [-800.0]) == 0.0
