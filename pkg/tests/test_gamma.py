import math

import mpmath
import numpy as np

from eqdisco.expr.functions import gamma, gamma_vec


def test_factorial_identity():
    for n in range(1, 11):
        expected = float(math.factorial(n - 1))
        assert abs(gamma(float(n)) - expected) / expected < 1e-10


def test_recurrence():
    rng = np.random.default_rng(17)
    for z in rng.uniform(0.5, 10.0, 100):
        lhs = gamma(z + 1.0)
        rhs = z * gamma(z)
        assert abs(lhs - rhs) / abs(lhs) < 1e-8


def test_reflection_region_against_mpmath():
    for z in (-2.5, -0.5, 0.1, 0.25, 0.49):
        expected = float(mpmath.gamma(z))
        assert abs(gamma(z) - expected) / abs(expected) < 1e-12


def test_poles_are_nonfinite():
    for z in (0.0, -1.0, -2.0, -7.0):
        assert not math.isfinite(gamma(z))


def test_overflow_goes_nonfinite():
    assert not math.isfinite(gamma(200.0))


def test_vectorized_matches_scalar():
    rng = np.random.default_rng(23)
    zs = rng.uniform(-5.0, 20.0, 500)
    v = gamma_vec(zs)
    s = np.array([gamma(float(z)) for z in zs])
    finite = np.isfinite(s)
    assert np.array_equal(finite, np.isfinite(v))
    np.testing.assert_allclose(v[finite], s[finite], rtol=1e-12)
