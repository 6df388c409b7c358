import numpy as np
import pytest

from eqdisco.data import Dataset
from eqdisco.problem import Hypothesis, ProblemSpec


@pytest.fixture
def spec_x():
    return ProblemSpec(name="toy", var_names=("x",))


@pytest.fixture
def spec_xy():
    return ProblemSpec(name="toy2", var_names=("x", "y"))


@pytest.fixture
def linear_data(spec_x):
    """50 noiseless rows of y = 2x + 1."""
    rng = np.random.default_rng(42)
    x = rng.uniform(-5.0, 5.0, 50)
    return Dataset(("x",), x.reshape(-1, 1), 2.0 * x + 1.0)


@pytest.fixture
def linear_holdout():
    rng = np.random.default_rng(43)
    x = rng.uniform(-5.0, 5.0, 50)
    return Dataset(("x",), x.reshape(-1, 1), 2.0 * x + 1.0, split="test_id")


@pytest.fixture
def hypothesis():
    return Hypothesis("p0 * x")
