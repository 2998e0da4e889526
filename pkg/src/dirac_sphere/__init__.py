"""Clifford analysis on the unit sphere: the conformal Dirac operator, spherical
monogenics, reproducing kernels, Cauchy integrals and Sobolev estimates."""

from .clifford import Multivector, conjugate, frobenius_norm, geometric_product, grade_project, scalar_part
from .monogenics import BasisSet, harmonic_basis, monogenic_basis, orthonormal_basis
from .polynomials import MVPolynomial, dirac_apply, euler_apply, gamma_apply, laplacian_apply, vector_multiply
from .sphere import QuadratureError, QuadratureRule, SpectralCoeffs, build_quadrature

__version__ = "0.1.0"

__all__ = [
    "BasisSet",
    "MVPolynomial",
    "Multivector",
    "QuadratureError",
    "QuadratureRule",
    "SpectralCoeffs",
    "build_quadrature",
    "conjugate",
    "dirac_apply",
    "euler_apply",
    "frobenius_norm",
    "gamma_apply",
    "geometric_product",
    "grade_project",
    "harmonic_basis",
    "laplacian_apply",
    "monogenic_basis",
    "orthonormal_basis",
    "scalar_part",
    "vector_multiply",
]
