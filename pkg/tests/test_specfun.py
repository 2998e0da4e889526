import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import eval_gegenbauer, eval_jacobi

from dirac_sphere.clifford import Multivector, batch_product, generator_left_matrices, generator_right_matrices
from dirac_sphere.operators import calibrate_addition_sign, random_unit_vectors
from dirac_sphere.specfun import (
    ADDITION_ARGUMENT_SIGN,
    addition_kernel,
    cauchy_constant,
    cauchy_kernel,
    cauchy_kernel_values,
    gegenbauer,
    harmonic_dimension,
    pochhammer,
    reproducing_kernel,
)

T = np.linspace(-1, 1, 41)


def test_pochhammer():
    assert pochhammer(3.0, 0) == 1.0
    assert pochhammer(1.0, 5) == 120.0
    assert pochhammer(0.5, 2) == 0.75


@pytest.mark.parametrize("lam", [0.5, 1.0, 1.5, 2.5])
@pytest.mark.parametrize("m", range(7))
def test_gegenbauer_matches_scipy(m, lam):
    assert_allclose(gegenbauer(m, lam, T), eval_gegenbauer(m, lam, T), atol=1e-12, rtol=1e-12)


def test_gegenbauer_closed_forms():
    assert_allclose(gegenbauer(1, 1.5, T), 3 * T)
    assert_allclose(gegenbauer(2, 0.5, T), (3 * T**2 - 1) / 2, atol=1e-15)
    # C_m^lam(1) = (2 lam)_m / m!
    for m in range(6):
        assert gegenbauer(m, 1.25, 1.0) == pytest.approx(pochhammer(2.5, m) / math.factorial(m))


@pytest.mark.parametrize("lam", [0.5, 1.0, 1.5])
@pytest.mark.parametrize("m", [1, 2, 4, 5])
def test_gegenbauer_proportional_to_jacobi(m, lam):
    jac = eval_jacobi(m, lam - 0.5, lam - 0.5, T)
    keep = np.abs(jac) > 1e-8
    ratio = gegenbauer(m, lam, T[keep]) / jac[keep]
    assert np.ptp(ratio) < 1e-10 * abs(ratio[0])


@pytest.mark.parametrize("m", range(6))
def test_gegenbauer_bounded_by_value_at_one(m):
    assert np.all(np.abs(gegenbauer(m, 1.0, T)) <= gegenbauer(m, 1.0, 1.0) + 1e-12)


def test_gegenbauer_rejects_nonpositive_index():
    with pytest.raises(ValueError):
        gegenbauer(2, 0.0, 0.3)


def test_harmonic_dimension():
    assert [harmonic_dimension(2, m) for m in range(6)] == [1, 3, 5, 7, 9, 11]
    assert [harmonic_dimension(3, m) for m in range(5)] == [1, 4, 9, 16, 25]
    assert [harmonic_dimension(1, m) for m in range(4)] == [1, 2, 2, 2]


def test_addition_sign_calibration_is_frozen():
    cal = calibrate_addition_sign(2, 5, pairs=50, seed=0)
    assert cal["sign"] == ADDITION_ARGUMENT_SIGN
    assert min(cal["residual_plus"], cal["residual_minus"]) < 1e-10
    assert max(cal["residual_plus"], cal["residual_minus"]) > 1e-2


def test_addition_kernel_at_coincident_points():
    # sum_k Y_mk(w)^2 = N(n, m) / |S^n|
    assert addition_kernel(2, 3, 1.0) == pytest.approx(7 / (4 * math.pi))


def test_reproducing_kernel_broadcasts():
    rng = np.random.default_rng(0)
    w = random_unit_vectors(rng, 4, 3)
    v = random_unit_vectors(rng, 5, 3)
    k = reproducing_kernel(2, 3, w[:, None, :], v[None, :, :])
    assert k.shape == (4, 5)
    assert k[1, 2] == pytest.approx(reproducing_kernel(2, 3, w[1], v[2]))


def test_cauchy_kernel_values():
    x = np.array([0.0, 2.0, 0.0])
    g = cauchy_kernel(x)
    assert_allclose(g.coeffs, Multivector.vector(-x / 8).coeffs)
    assert_allclose(cauchy_kernel_values(x[None, :])[0], g.coeffs)
    with pytest.raises(ValueError):
        cauchy_kernel(np.zeros(3))


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_cauchy_kernel_is_two_sided_monogenic(dim):
    rng = np.random.default_rng(dim)
    h = 1e-5
    left, right = generator_left_matrices(dim), generator_right_matrices(dim)
    for x in random_unit_vectors(rng, 5, dim) * rng.uniform(1.0, 2.0, (5, 1)):
        dl = np.zeros(1 << dim)
        dr = np.zeros(1 << dim)
        for i in range(dim):
            step = np.zeros(dim)
            step[i] = h
            d = (cauchy_kernel(x + step).coeffs - cauchy_kernel(x - step).coeffs) / (2 * h)
            dl += left[i] @ d
            dr += right[i] @ d
        assert np.linalg.norm(dl) < 1e-7
        assert np.linalg.norm(dr) < 1e-7


def test_cauchy_kernel_homogeneity():
    x = np.array([0.3, -0.4, 1.2])
    assert_allclose(cauchy_kernel(2.5 * x).coeffs, 2.5 ** (1 - 3) * cauchy_kernel(x).coeffs, rtol=1e-13)
    # x G(x) is the scalar 1 / |x|^(N-2)
    xg = batch_product(Multivector.vector(x).coeffs, cauchy_kernel(x).coeffs)
    assert_allclose(xg, np.eye(8)[0] / np.linalg.norm(x), atol=1e-15)


def test_cauchy_constant():
    assert cauchy_constant(3) == pytest.approx(1 / (4 * math.pi))
    assert cauchy_constant(2) == pytest.approx(1 / (2 * math.pi))
