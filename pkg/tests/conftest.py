import numpy as np
import pytest

from steroid.services.symtensor import new_symmetric


EXAMPLE_1 = [((1, 1, 1), 24.0), ((2, 1, 1), 18.0), ((2, 2, 1), 12.0), ((2, 2, 2), 6.0)]
COMON = [((1, 1, 1), -1.0), ((2, 2, 1), 1.0)]

EXAMPLE_1_TEXT = """\
# small order-3 example
symtensor 3 2
1 1 1 24
2 1 1 18
2 2 1 12
2 2 2 6
"""


@pytest.fixture
def example1():
    return new_symmetric(3, 2, EXAMPLE_1)


@pytest.fixture
def comon():
    return new_symmetric(3, 2, COMON)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def example1_file(tmp_path):
    path = tmp_path / "example1.txt"
    path.write_text(EXAMPLE_1_TEXT)
    return path
