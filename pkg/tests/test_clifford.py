import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from dirac_sphere.clifford import (
    Multivector,
    batch_product,
    conjugate,
    frobenius_norm,
    geometric_product,
    grade_project,
    product_table,
    scalar_part,
)


def naive_blade_product(a, b):
    """Multiply two blades given as sorted generator lists by bubble sorting
    the concatenation and cancelling equal neighbours (e_i e_i = -1)."""
    word = list(a) + list(b)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            if word[i] > word[i + 1]:
                word[i], word[i + 1] = word[i + 1], word[i]
                sign = -sign
                changed = True
            elif word[i] == word[i + 1]:
                del word[i : i + 2]
                sign = -sign
                changed = True
                break
    return sign, word


def mask_to_list(mask):
    return [i for i in range(8) if mask >> i & 1]


def list_to_mask(gens):
    return sum(1 << i for i in gens)


@pytest.mark.parametrize("dim", [1, 2, 3, 4])
def test_product_table_matches_naive_reduction(dim):
    index, sign = product_table(dim)
    for a, b in itertools.product(range(1 << dim), repeat=2):
        s, word = naive_blade_product(mask_to_list(a), mask_to_list(b))
        assert index[a, b] == list_to_mask(word)
        assert sign[a, b] == s


def e(i, dim=3):
    return Multivector.generator(dim, i)


def test_generator_square_is_minus_one():
    assert geometric_product(e(1), e(1)) == Multivector.scalar(3, -1.0)


def test_generators_anticommute():
    assert (e(1) * e(2) + e(2) * e(1)).allclose(Multivector(3))


def test_identity_is_neutral():
    a = Multivector(3, np.arange(8.0))
    assert Multivector.scalar(3) * a == a
    assert a * Multivector.scalar(3) == a


def test_bivector_square():
    b = e(1) * e(2)
    assert b * b == Multivector.scalar(3, -1.0)


def test_blade_mask_order():
    assert e(1) * e(2) == Multivector.blade(3, 0b011)
    assert e(2) * e(1) == Multivector.blade(3, 0b011, -1.0)


def test_conjugate_examples():
    assert conjugate(Multivector.scalar(3)) == Multivector.scalar(3)
    assert conjugate(e(1)) == -e(1)
    assert conjugate(e(1) * e(2)) == -(e(1) * e(2))


def test_scalar_grade_and_norm_examples():
    a = Multivector.scalar(3, 3.0) + 2 * e(1)
    assert scalar_part(a) == 3.0
    assert grade_project(a, 1) == 2 * e(1)
    assert frobenius_norm(e(1) + e(2)) == pytest.approx(np.sqrt(2))


def test_grade_project_range():
    a = Multivector(3, np.ones(8))
    with pytest.raises(ValueError):
        grade_project(a, 4)
    with pytest.raises(ValueError):
        grade_project(a, -1)


def test_grade_projections_sum_to_element():
    a = Multivector(4, np.random.default_rng(1).standard_normal(16))
    total = sum((grade_project(a, k) for k in range(5)), Multivector(4))
    assert total.allclose(a, atol=0)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        geometric_product(Multivector(2), Multivector(3))


def test_vector_square_is_negative_norm():
    rng = np.random.default_rng(0)
    for dim in (2, 3, 4):
        for x in rng.standard_normal((20, dim)):
            v = Multivector.vector(x)
            assert_allclose((v * v).coeffs, -np.eye(1 << dim)[0] * (x @ x), atol=1e-12)


def test_conjugate_sandwich_is_not_a_norm():
    # scalar part of conj(a) a is sum of squares, but conj(a) a is not scalar in general
    a = Multivector.scalar(3) + e(1) * e(2) * e(3)
    prod = conjugate(a) * a
    assert scalar_part(prod) == pytest.approx(frobenius_norm(a) ** 2)
    assert frobenius_norm(grade_project(prod, 3)) > 0


def test_batch_product_matches_objects():
    rng = np.random.default_rng(2)
    a, b = rng.standard_normal((2, 5, 16))
    out = batch_product(a, b)
    for i in range(5):
        assert_allclose(out[i], (Multivector(4, a[i]) * Multivector(4, b[i])).coeffs, atol=1e-13)


def test_immutable():
    a = Multivector(2)
    with pytest.raises(AttributeError):
        a.coeffs = np.ones(4)
    with pytest.raises(ValueError):
        a.coeffs[0] = 1.0


mv4 = st.lists(st.floats(-10, 10, allow_nan=False), min_size=16, max_size=16).map(
    lambda c: Multivector(4, np.array(c))
)


@settings(max_examples=50, deadline=None)
@given(mv4, mv4, mv4)
def test_associative_and_distributive(a, b, c):
    assert ((a * b) * c).allclose(a * (b * c), atol=1e-9)
    assert (a * (b + c)).allclose(a * b + a * c, atol=1e-9)


@settings(max_examples=50, deadline=None)
@given(mv4, mv4)
def test_conjugate_is_involutive_anti_automorphism(a, b):
    assert conjugate(conjugate(a)) == a
    assert conjugate(a * b).allclose(conjugate(b) * conjugate(a), atol=1e-9)
