import pytest

from psibench.models import base_polynomial_algebra
from psibench.rings import GeneratorSymbol, WeightedRing
from psibench.steenrod import gr_class
from psibench.unstable import (UnstableAlgebra, check_adem_table,
                               check_p0_identity_table)
from psibench.verdicts import FAIL, PASS


def test_table_action_on_polynomial_algebra():
    A = base_polynomial_algebra(2, d=1, D=6)
    x = A.ring.gen("x", mod=2)
    assert A.apply_P(0, x) == x
    assert A.apply_P(1, x) == x**2      # top power at d = 1
    assert not A.apply_P(2, x)
    # total operation is multiplicative: P(x^2) = (x + x^2)^2 = x^2 + x^4
    assert A.apply_P(0, x**2) == x**2
    assert not A.apply_P(1, x**2)
    assert A.apply_P(2, x**2) == x**4


def test_table_action_odd_prime():
    A = base_polynomial_algebra(3, d=1, D=9)
    x = A.ring.gen("x", mod=3)
    assert A.apply_P(1, x) == x**3
    assert A.apply_P(0, x**2) == x**2
    assert A.apply_P(1, x**2) == x**4 * 2     # binom(2,1) t^(q+1) pattern
    assert A.apply_P(2, x**2) == x**6


def test_class_level_operations_respect_window():
    A = base_polynomial_algebra(2, d=1, D=3)
    x = A.ring.gen("x", mod=2)
    c = gr_class(A, x.integer_lift(), 2)
    assert A.P(0, c) == c
    top = A.P(1, c)
    assert top.rep == x**2
    assert not A.P(5, c)
    big = gr_class(A, (x**3).integer_lift(), 6)
    with pytest.raises(ValueError):
        A.P(3, big)  # target degree 12 is outside the window and undecidable


def test_table_checkers():
    A = base_polynomial_algebra(3, d=1, D=6)
    degrees = [2, 4, 6]
    assert check_p0_identity_table(A, degrees, 3, 0).status == PASS
    for d in degrees:
        assert check_adem_table(A, d, 3, 0).status != FAIL


def test_middle_table_validation():
    x = GeneratorSymbol("x", (), 4)
    ring = WeightedRing([x], 8)
    good = {("x", ()): {1: ring.zero(3)}}
    UnstableAlgebra(ring, 3, middles=good)
    with pytest.raises(ValueError):
        UnstableAlgebra(ring, 3, middles={("x", ()): {2: ring.zero(3)}})  # i = d
    with pytest.raises(ValueError):
        UnstableAlgebra(ring, 3, middles={("x", ()): {1: ring.var(x, 3)}})  # bad weight


def test_cartan_for_table_operations():
    A = base_polynomial_algebra(3, d=1, D=9)
    x = A.ring.gen("x", mod=3)
    a, b = x, x**2
    for i in range(4):
        target = 6 + 2 * i * 2
        if target > A.ring.max_weight:
            continue
        lhs = A.apply_P(i, a * b)
        rhs = A.ring.zero(3)
        for l in range(i + 1):
            rhs = rhs + A.apply_P(l, a) * A.apply_P(i - l, b)
        assert lhs == rhs
