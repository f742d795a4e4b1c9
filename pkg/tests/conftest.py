import pytest

from psibench.models import (adem_failure_ring, dual_numbers_ring,
                             projective_space_ring)
from psibench.rings import GeneratorSymbol, WeightedRing


@pytest.fixture
def dual3():
    return dual_numbers_ring(3, 2)


@pytest.fixture
def broken3():
    return adem_failure_ring(3)


@pytest.fixture
def cp_p2():
    return projective_space_ring(2, 4)


@pytest.fixture
def free_ring():
    """Relation-free ring on x (weight 2) and y (weight 4), D = 8."""
    x = GeneratorSymbol("x", (), 2)
    y = GeneratorSymbol("y", (), 4)
    return WeightedRing([x, y], 8)
