from math import comb

import numpy as np
import pytest
from numpy.testing import assert_allclose

from dirac_sphere import polynomials as poly
from dirac_sphere.monogenics import (
    BasisSet,
    DependentBasisError,
    gram_matrix,
    harmonic_basis,
    monogenic_basis,
    orthonormal_basis,
    orthonormalize,
    q_basis_on_sphere,
)
from dirac_sphere.sphere import QuadratureError, build_quadrature

# nullspace dimensions worked out from the monomial counts: dim ker(Laplacian)
# on degree-m forms is C(m+n, n) - C(m+n-2, n)
H_SCALAR = {2: [1, 3, 5, 7, 9], 3: [1, 4, 9, 16, 25]}


@pytest.mark.parametrize("n", [2, 3])
def test_harmonic_dimensions(n):
    for m, expected in enumerate(H_SCALAR[n]):
        assert len(harmonic_basis(n, m)) == expected
        assert expected == comb(m + n, n) - (comb(m + n - 2, n) if m >= 2 else 0)


@pytest.mark.parametrize("n", [2, 3])
def test_monogenic_dimensions(n):
    for m in range(5):
        assert len(monogenic_basis(n, m)) == comb(m + n - 1, n - 1) * 2 ** (n + 1)


@pytest.mark.parametrize("n", [2, 3])
def test_fischer_split(n):
    # Clifford-valued H_m = P_m + x P_(m-1) as real dimensions
    cl = 2 ** (n + 1)
    for m in range(1, 5):
        assert len(harmonic_basis(n, m)) * cl == len(monogenic_basis(n, m)) + len(monogenic_basis(n, m - 1))


def test_basis_elements_satisfy_their_equations():
    for space in ("H", "P", "Q"):
        b = orthonormal_basis(2, 3, space)
        b.check_invariants()
        assert b.orthonormal


def test_q_functions_are_harmonic_of_next_degree():
    b = orthonormal_basis(2, 2, "Q")
    assert b.degree == -4
    assert b.function_degree == 3
    for f in b.functions():
        assert poly.laplacian_apply(f).max_abs_coeff() < 1e-10


def test_p_and_q_blocks_orthogonal():
    quad = build_quadrature(3, 8)
    funcs = orthonormal_basis(3, 1, "P").functions() + orthonormal_basis(3, 1, "Q").functions()
    assert_allclose(gram_matrix(funcs, quad), np.eye(len(funcs)), atol=1e-10)


def test_check_invariants_detects_corruption():
    b = orthonormal_basis(2, 1, "H")
    bad = BasisSet(2, 1, "H", b.elements[:-1] + (b.elements[-1] * 2.0,), True, b.quadrature_degree)
    with pytest.raises(ValueError, match="Gram"):
        bad.check_invariants()
    not_harmonic = BasisSet(2, 2, "H", (poly.MVPolynomial.monomial(3, [2, 0, 0]),))
    with pytest.raises(ValueError, match="harmonic"):
        not_harmonic.check_invariants()


def test_dependent_elements_rejected():
    b = harmonic_basis(2, 1)
    dup = BasisSet(2, 1, "H", b.elements + (b.elements[0] * 3.0,))
    with pytest.raises(DependentBasisError) as info:
        orthonormalize(dup, build_quadrature(2, 4))
    assert info.value.index == 3


def test_orthonormalize_checks_quadrature():
    with pytest.raises(QuadratureError):
        orthonormalize(harmonic_basis(2, 3), build_quadrature(2, 4))


def test_q_requires_p_basis():
    with pytest.raises(ValueError):
        q_basis_on_sphere(harmonic_basis(2, 1))


def test_bad_space_tag():
    with pytest.raises(ValueError):
        BasisSet(2, 0, "Z", ())


def test_invalid_degree():
    with pytest.raises(ValueError):
        harmonic_basis(0, 1)
    with pytest.raises(ValueError):
        monogenic_basis(2, -1)


def test_evaluate_is_read_only_and_memoized():
    b = orthonormal_basis(2, 2, "H")
    pts = build_quadrature(2, 4).nodes
    v1 = b.evaluate(pts)
    assert b.evaluate(pts) is v1
    with pytest.raises(ValueError):
        v1[0, 0, 0] = 1.0
