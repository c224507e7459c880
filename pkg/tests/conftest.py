import numpy as np
import pytest

from lppdom.fixtures import load_fixture

ROWS_C = [[1, 1, 1], [1, 1, 1], [1, 1, 1]]
ROWS_E = [[1, 5, 1], [2, 3, 1], [4, 2, 6]]


@pytest.fixture
def fixture_c():
    return load_fixture("C")


@pytest.fixture
def fixture_e():
    return load_fixture("E")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
