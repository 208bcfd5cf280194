from unittest.mock import MagicMock

import pytest
import sympy

from src.gkzpy.errors import InputError
from src.gkzpy.exactla import ConfigMatrix
from src.gkzpy.logging import Logger


@pytest.fixture
def logger():
    """Create a mock logger for testing."""
    return MagicMock(spec=Logger)


@pytest.fixture
def config_matrix_factory():
    """
    Factory fixture for configuration matrices.

    Row lists are passed straight to ConfigMatrix so validation errors surface in the test.
    """

    def _create(*rows):
        return ConfigMatrix([list(row) for row in rows])

    return _create


@pytest.fixture
def one_row():
    """A = (1 2), the smallest configuration with an irregular slope."""
    return ConfigMatrix([[1, 2]])


@pytest.fixture
def one_three_five():
    """A = (1 3 5), whose modified system for w = (0 1 1) has the slope 5."""
    return ConfigMatrix([[1, 3, 5]])


@pytest.fixture
def symbols():
    """Generic parameters beta and alpha."""
    return sympy.symbols("beta alpha")


@pytest.fixture
def random_configuration():
    """
    Factory fixture drawing pointed configurations with at most two rows and five columns.

    The first row is positive. Draws that repeat a column, lose rank or miss Z^d are redrawn.
    """

    def _draw(rng, max_entry=5, spread=3):
        d = int(rng.integers(1, 3))
        while True:
            n = int(rng.integers(d + 1, 6))
            rows = [[int(x) for x in rng.integers(1, max_entry + 1, n)]]
            if d == 2:
                rows.append([int(x) for x in rng.integers(-spread, spread + 1, n)])
            if len(set(zip(*rows))) < n:
                continue
            try:
                return ConfigMatrix(rows)
            except InputError:
                continue

    return _draw
