"""Special functions: Pochhammer symbols, Gegenbauer polynomials, the
zonal (addition theorem) kernel, the reproducing kernel of polynomials of
bounded degree on S^n, and the Cauchy kernel of the Dirac operator."""

from __future__ import annotations

import math

import numpy as np

from . import clifford
from .clifford import Multivector
from .sphere import surface_area

# Argument of the Gegenbauer kernel is sign * <omega, nu>. Fixed by comparing
# against sums of orthonormal harmonics; see operators.calibrate_addition_sign.
ADDITION_ARGUMENT_SIGN = 1

CAUCHY_EPS = 1e-12


def pochhammer(a: float, l: int) -> float:
    """Rising factorial ``a (a+1) ... (a+l-1)``; ``(a)_0 = 1``."""
    if l < 0:
        raise ValueError("l must be nonnegative")
    out = 1.0
    for j in range(l):
        out *= a + j
    return out


def gegenbauer(m: int, lam: float, t):
    """Gegenbauer polynomial ``C_m^lam(t)`` by the three-term recurrence.

    Accepts scalar or array ``t``; returns the same shape.
    """
    if m < 0:
        raise ValueError("degree must be nonnegative")
    if lam <= 0:
        raise ValueError(f"Gegenbauer index must be positive, got {lam}")
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if m == 0:
        return prev if prev.ndim else float(prev)
    cur = 2 * lam * t
    for k in range(2, m + 1):
        prev, cur = cur, (2 * t * (k + lam - 1) * cur - (k + 2 * lam - 2) * prev) / k
    return cur if cur.ndim else float(cur)


def harmonic_dimension(n: int, m: int) -> int:
    """Dimension of real scalar spherical harmonics of degree ``m`` on S^n."""
    if m == 0:
        return 1
    return (2 * m + n - 1) * math.factorial(m + n - 2) // (math.factorial(n - 1) * math.factorial(m))


def addition_kernel(n: int, m: int, t):
    """``N(n,m)/|S^n| * C_m^lam(s t) / C_m^lam(1)`` with ``lam = (n-1)/2``.

    ``t`` is the inner product of two unit vectors and ``s`` the calibrated
    argument sign. Equals ``sum_k Y_mk(omega) Y_mk(nu)`` for any real
    orthonormal basis of degree-m harmonics.
    """
    lam = (n - 1) / 2
    scale = harmonic_dimension(n, m) / surface_area(n)
    return scale * gegenbauer(m, lam, ADDITION_ARGUMENT_SIGN * np.asarray(t, dtype=float)) / gegenbauer(m, lam, 1.0)


def reproducing_kernel(n: int, a: int, omega, nu):
    """Kernel of the projection onto harmonics of degree <= ``a``.

    ``omega`` and ``nu`` are unit vectors (or broadcastable stacks of them).
    """
    if a < 0:
        raise ValueError("a must be nonnegative")
    t = np.clip(np.sum(np.asarray(omega, dtype=float) * np.asarray(nu, dtype=float), axis=-1), -1.0, 1.0)
    return sum(addition_kernel(n, m, t) for m in range(a + 1))


def cauchy_kernel(x) -> Multivector:
    """``-x / |x|**N`` as a vector multivector in ambient dimension ``N = len(x)``."""
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if r <= CAUCHY_EPS:
        raise ValueError("Cauchy kernel is singular at the origin")
    return Multivector.vector(-x / r ** x.shape[0])


def cauchy_kernel_values(points) -> np.ndarray:
    """Batched :func:`cauchy_kernel`; ``points`` has shape ``(P, N)``."""
    pts = np.asarray(points, dtype=float)
    r = np.linalg.norm(pts, axis=1)
    if np.any(r <= CAUCHY_EPS):
        raise ValueError("Cauchy kernel is singular at the origin")
    return clifford.vector_coeffs(-pts / r[:, None] ** pts.shape[1])


def cauchy_constant(ambient_dim: int) -> float:
    """Normalization ``1/|S^(N-1)|`` in front of the Cauchy integral on the unit ball."""
    return 1.0 / surface_area(ambient_dim - 1)
