import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from psibench.atiyah import (_binomial_correction,
                             atiyah_decompose, atiyah_product, atiyah_shift,
                             atiyah_sum, graded_classes_agree, random_element,
                             scalar_decomposition, zero_decomposition)
from psibench.models import (adem_failure_ring, dual_numbers_ring,
                             projective_space_ring)


def test_dual_numbers_psi_and_layers():
    for p in (2, 3, 5):
        for k in (1, 2, p + 1):
            A = dual_numbers_ring(p, k)
            e = A.ring.gen("e")
            assert A.apply_psi(e) == e * (p * p * k)
            d = atiyah_decompose(A, e, 2)
            assert d.layers == (e * k, A.ring.zero(), A.ring.zero())
            assert d.problems() == []


def test_broken_adem_psi_formula():
    # p^(p-1) x + p^(p-3) x^3 + ... + p x^(p-1) + x^p, no x^2 term
    for p in (3, 5):
        A = adem_failure_ring(p, D=p * (p - 1))  # wide enough to see x^p
        x = A.ring.gen("x")
        expected = A.ring.zero()
        for i in range(1, p + 1):
            if i != 2:
                expected = expected + x**i * p ** (p - i)
        assert A.apply_psi(x) == expected
        d = atiyah_decompose(A, x, p - 1)
        assert d.layers[0] == x
        assert not d.layers[1]
        for i in range(2, p):
            assert d.layers[i] == x ** (i + 1)
        assert d.layers[p - 1] == x**p
        assert d.problems() == []


def test_scalar_decomposition_fermat():
    A = adem_failure_ring(3)
    d = scalar_decomposition(A, 2)
    assert d.layers[0] == A.ring.scalar(-2)
    assert d.layers[1] == A.ring.scalar(8)
    assert d.weighted_sum() == A.ring.scalar(2)
    assert d.problems() == []


def test_square_of_generator_layers():
    # psi(x)^2 = (9x + x^3)^2 = 81 x^2 + 18 x^4 + x^6 peels to (x^2,0,2x^4,0,x^6)
    A = adem_failure_ring(3, D=12)
    x = A.ring.gen("x")
    dx = atiyah_decompose(A, x, 2)
    d = atiyah_product(dx, dx)
    assert d.level == 4
    assert d.layers == (x**2, A.ring.zero(), x**4 * 2, A.ring.zero(), x**6)
    assert d.problems() == []


def test_product_unit_and_level_additivity():
    A = adem_failure_ring(3, D=12)
    x = A.ring.gen("x")
    dx = atiyah_decompose(A, x, 2)
    done = scalar_decomposition(A, 1)
    prod = atiyah_product(done, dx)
    assert prod.level == dx.level
    assert prod.layers == dx.layers
    d2 = atiyah_product(dx, atiyah_product(dx, dx))
    assert d2.level == 6
    assert d2.problems() == []


def test_product_zero_level_branches():
    A = adem_failure_ring(3, D=12)
    d2 = scalar_decomposition(A, 2)
    d5 = scalar_decomposition(A, 5)
    both = atiyah_product(d2, d5)
    assert both.level == 0
    assert both.weighted_sum() == A.ring.scalar(10)
    assert both.problems() == []
    x = A.ring.gen("x")
    dx = atiyah_decompose(A, x, 2)
    mixed = atiyah_product(d2, dx)
    assert mixed.level == 2
    assert mixed.weighted_sum() == A.apply_psi(x * 2)
    assert mixed.problems() == []
    swapped = atiyah_product(dx, d2)
    assert swapped.weighted_sum() == mixed.weighted_sum()


def test_sum_with_zero_is_identity():
    A = adem_failure_ring(3, D=12)
    x = A.ring.gen("x")
    dx = atiyah_decompose(A, x, 2)
    for level in (2, 4):
        combined = atiyah_sum(dx, zero_decomposition(A, level))
        assert combined.level == 2
        assert combined.layers == dx.layers
        assert combined.problems() == []


def test_sum_across_levels_exact():
    # x at level 2 plus x^2 at level 4: the combined splitting of x + x^2
    A = adem_failure_ring(3, D=12)
    x = A.ring.gen("x")
    dx = atiyah_decompose(A, x, 2)
    dxx = atiyah_product(dx, dx)
    combined = atiyah_sum(dx, dxx)
    assert combined.level == 2
    assert combined.weighted_sum() == A.apply_psi(x + x**2)
    assert combined.problems() == []


def test_sum_rejects_wrong_order():
    A = adem_failure_ring(3, D=12)
    x = A.ring.gen("x")
    dx = atiyah_decompose(A, x, 2)
    dxx = atiyah_product(dx, dx)
    with pytest.raises(ValueError):
        atiyah_sum(dxx, dx)


def test_binomial_correction_p2():
    A = projective_space_ring(2, 4)
    t = A.ring.gen("t")
    # (1/2) binom(2,1) = 1, so the correction for r = s is r*s = r^2
    assert _binomial_correction(A, t, t) == t**2
    for p in (3, 5):
        B = adem_failure_ring(p)
        x = B.ring.gen("x")
        c = _binomial_correction(B, x, x**2)
        assert (x + x**2) ** p - c * p == x**p + x ** (2 * p)


def test_shift_golden():
    A = projective_space_ring(3, 4)
    t = A.ring.gen("t")
    d = atiyah_decompose(A, t, 1)
    shifted = atiyah_shift(d)
    assert shifted.level == 0
    assert shifted.layers == (d.layers[0], t**3)
    assert shifted.weighted_sum() == A.apply_psi(t)

    B = adem_failure_ring(3, D=12)
    x = B.ring.gen("x")
    d2 = atiyah_decompose(B, x, 2)
    down = atiyah_shift(atiyah_shift(d2))
    assert down.level == 0
    assert down.weighted_sum() == B.apply_psi(x)
    assert down.layers[1] == x**3
    with pytest.raises(ValueError):
        atiyah_shift(down)


def test_shift_coherence_in_graded():
    # decompose at q-1 and shift of decompose at q have equal layer classes
    for A, gen, q in ((adem_failure_ring(3, D=12), "x", 2),
                      (projective_space_ring(2, 5), "t", 3)):
        e = A.ring.gen(gen) ** (q * 2 // A.ring.symbol(gen).weight)
        direct = atiyah_decompose(A, e, q - 1)
        shifted = atiyah_shift(atiyah_decompose(A, e, q))
        layers = range(1, q) if q - 1 > 0 else [1]
        for i in layers:
            w = 2 * (q - 1) + 2 * i * (A.p - 1)
            assert graded_classes_agree(A, direct.layers[i], shifted.layers[i], w) in (True, None)


def test_decompose_errors():
    A = adem_failure_ring(3)
    x = A.ring.gen("x")
    with pytest.raises(ValueError):
        atiyah_decompose(A, A.ring.zero(), 0)
    with pytest.raises(ValueError):
        atiyah_decompose(A, x, 3)  # 2q = 6 > weight 4
    with pytest.raises(ValueError):
        atiyah_decompose(A, x.reduce_mod(3), 2)


def test_decompose_mixed_terms_at_q0():
    A = adem_failure_ring(3, D=12)
    x = A.ring.gen("x")
    e = A.ring.scalar(7) + x * 2
    d = atiyah_decompose(A, e, 0)
    assert d.level == 0
    assert d.weighted_sum() == A.apply_psi(e)
    assert d.layers[1] == e**3


def test_randomized_exactness_all_golden_rings():
    rng = random.Random(11)
    rings = [dual_numbers_ring(3, 2), dual_numbers_ring(2, 3),
             adem_failure_ring(3), adem_failure_ring(5),
             projective_space_ring(2, 6), projective_space_ring(3, 6)]
    for A in rings:
        for _ in range(25):
            e = random_element(A, rng, min_weight=0)
            if not e:
                continue
            qmax = int(e.weight() // 2)
            q = rng.randrange(0, qmax + 1)
            d = atiyah_decompose(A, e, q)
            assert d.problems() == [], (A.name, str(e), q)


def test_apply_psi_is_a_ring_map_and_frobenius_congruence():
    rng = random.Random(5)
    for A in (adem_failure_ring(3), projective_space_ring(2, 5)):
        p = A.p
        for _ in range(20):
            a = random_element(A, rng, min_weight=0)
            b = random_element(A, rng, min_weight=0)
            assert A.apply_psi(a + b) == A.apply_psi(a) + A.apply_psi(b)
            assert A.apply_psi(a * b) == A.apply_psi(a) * A.apply_psi(b)
            diff = A.apply_psi(a) - a**p
            assert all(c % p == 0 for c in diff.terms.values())
        assert A.apply_psi(A.ring.one()) == A.ring.one()


def test_layer_weight_contracts():
    A = projective_space_ring(3, 6)
    t = A.ring.gen("t")
    for q in (1, 2, 3):
        d = atiyah_decompose(A, t**q, q)
        for i, layer in enumerate(d.layers if q else ()):
            assert layer.weight() >= 2 * q + 2 * i * (A.p - 1)


_CP = projective_space_ring(3, 5)
_CP_MONOS = [()] + [m for w in range(2, _CP.ring.max_weight + 1, 2)
                    for m in _CP.ring.monomials_of_weight(w)]


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_decompose_exactness_property(data):
    terms = data.draw(st.lists(
        st.tuples(st.sampled_from(_CP_MONOS), st.integers(-9, 9)),
        min_size=1, max_size=4))
    e = _CP.ring.element({m: c for m, c in terms})
    assume(bool(e))
    qmax = int(e.weight() // 2)
    q = data.draw(st.integers(0, qmax))
    d = atiyah_decompose(_CP, e, q)
    assert d.problems() == []


@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_sum_and_product_identities_property(data):
    monos = [m for m in _CP_MONOS if m]
    a = _CP.ring.element({data.draw(st.sampled_from(monos)): data.draw(st.integers(-5, 5))})
    b = _CP.ring.element({data.draw(st.sampled_from(monos)): data.draw(st.integers(-5, 5))})
    assume(bool(a) and bool(b))
    da = atiyah_decompose(_CP, a, int(a.weight() // 2))
    db = atiyah_decompose(_CP, b, int(b.weight() // 2))
    prod = atiyah_product(da, db)
    assert prod.level == da.level + db.level
    assert prod.problems() == []
    lo, hi = (da, db) if da.level <= db.level else (db, da)
    total = atiyah_sum(lo, hi)
    assert total.problems() == []


def test_generator_data_validation():
    from psibench.atiyah import PrePsiAlgebra
    from psibench.rings import GeneratorSymbol, WeightedRing
    x = GeneratorSymbol("x", (), 4)
    ring = WeightedRing([x], 8)
    xe = ring.var(x)
    with pytest.raises(ValueError):  # wrong layer count
        PrePsiAlgebra(ring, 3, {x.key: (xe, xe**3)})
    with pytest.raises(ValueError):  # top layer must be x^p
        PrePsiAlgebra(ring, 3, {x.key: (xe, ring.zero(), xe**2)})
    with pytest.raises(ValueError):  # layer weight too small
        PrePsiAlgebra(ring, 3, {x.key: (xe, xe, xe**3)})
    with pytest.raises(ValueError):  # missing generator data
        PrePsiAlgebra(ring, 3, {})
