"""The conformal Dirac operator on S^n, its spectral calculus, the projection
onto harmonics of bounded degree, Sobolev norms and embedding estimates, and
the Cauchy theorem / integral formula checks on the unit ball."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import clifford
from . import polynomials as poly
from .clifford import Multivector
from .monogenics import evaluate_functions, harmonic_bases, monogenic_basis, orthonormal_basis
from .polynomials import MVPolynomial
from .specfun import (
    cauchy_constant,
    cauchy_kernel_values,
    gegenbauer,
    harmonic_dimension,
    reproducing_kernel,
)
from .sphere import (
    QuadratureError,
    QuadratureRule,
    SpectralCoeffs,
    build_quadrature,
    fourier_coefficients,
    surface_area,
    synthesize,
)

UNIT_TOL = 1e-12
MONOGENIC_TOL = 1e-10
CIF_MAX_RADIUS = 0.8


@dataclass(frozen=True)
class SobolevSpec:
    s: float
    n: int

    def __post_init__(self):
        if self.s < 0:
            raise ValueError(f"Sobolev order must be nonnegative, got {self.s}")
        if self.n < 1:
            raise ValueError(f"sphere dimension must be >= 1, got {self.n}")

    def weight(self, m: int) -> float:
        """``(m + (n-1)/2) ** (2 s)``."""
        return (m + (self.n - 1) / 2) ** (2 * self.s)


@dataclass
class SpectrumReport:
    n: int
    m_max: int
    computed_eigenvalues: list
    expected: list
    max_abs_error: float
    per_degree: list = field(default_factory=list)

    def passed(self, tol: float) -> bool:
        return self.max_abs_error < tol and all(d["balanced"] for d in self.per_degree)

    def to_dict(self, tol: float) -> dict:
        return {
            "n": self.n,
            "m_max": self.m_max,
            "max_abs_error": self.max_abs_error,
            "tol": tol,
            "passed": self.passed(tol),
            "degrees": self.per_degree,
        }


# conformal Dirac operator, symbolic route


def conformal_dirac_poly(f: MVPolynomial, n: int) -> MVPolynomial:
    """Polynomial whose restriction to S^n is ``omega (Gamma - n/2) f``."""
    if f.ambient_dim != n + 1:
        raise ValueError(f"polynomial lives in R^{f.ambient_dim}, expected R^{n + 1}")
    return poly.vector_multiply(poly.gamma_apply(f) - f * (n / 2))


def conformal_dirac_symbolic(f: MVPolynomial, omega, n: int) -> Multivector:
    omega = np.asarray(omega, dtype=float)
    if abs(np.linalg.norm(omega) - 1.0) > UNIT_TOL:
        raise ValueError("evaluation point must lie on the unit sphere")
    return poly.poly_eval(conformal_dirac_poly(f, n), omega)


# conformal Dirac operator, matrix route


def monogenic_block(n: int, m: int) -> list[MVPolynomial]:
    """Orthonormal real basis of ``P_m + omega P_m`` as polynomials (P part first)."""
    p = orthonormal_basis(n, m, "P")
    q = orthonormal_basis(n, m, "Q")
    return p.functions() + q.functions()


def operator_matrix(funcs, images, quad: QuadratureRule, integrand_degree: int | None = None) -> np.ndarray:
    """``M[i, j] = <funcs[i], images[j]>`` under the real L2 pairing.

    ``integrand_degree`` certifies exactness when the polynomials reduce on
    the sphere to lower degree than their representatives (``x x = -1``).
    """
    if integrand_degree is None:
        integrand_degree = max(f.degree for f in funcs) + max(g.degree for g in images)
    quad.require(integrand_degree)
    sw = np.sqrt(quad.weights)[None, :, None]
    a = (evaluate_functions(list(funcs), quad.nodes) * sw).reshape(len(funcs), -1)
    b = (evaluate_functions(list(images), quad.nodes) * sw).reshape(len(images), -1)
    return a @ b.T


# The block P_m + omega P_m is invariant under all three operators below and
# its functions have sphere degree <= m + 1, so products have degree <= 2m + 2.


def assemble_dirac_matrix(n: int, m: int, quad: QuadratureRule) -> np.ndarray:
    """Matrix of the conformal Dirac operator on the degree-m monogenic block."""
    funcs = monogenic_block(n, m)
    return operator_matrix(funcs, [conformal_dirac_poly(f, n) for f in funcs], quad, 2 * m + 2)


def assemble_gamma_matrix(n: int, m: int, quad: QuadratureRule) -> np.ndarray:
    funcs = monogenic_block(n, m)
    return operator_matrix(funcs, [poly.gamma_apply(f) for f in funcs], quad, 2 * m + 2)


def assemble_omega_matrix(n: int, m: int, quad: QuadratureRule) -> np.ndarray:
    """Matrix of left multiplication by omega on the block."""
    funcs = monogenic_block(n, m)
    return operator_matrix(funcs, [poly.vector_multiply(f) for f in funcs], quad, 2 * m + 2)


def intertwining_residual(n: int, m: int, quad: QuadratureRule) -> float:
    """``max |M_G M_w + M_w M_G - n M_w|`` on the degree-m block."""
    g = assemble_gamma_matrix(n, m, quad)
    w = assemble_omega_matrix(n, m, quad)
    return float(np.max(np.abs(g @ w + w @ g - n * w)))


def block_spectrum(n: int, m: int, quad: QuadratureRule) -> dict:
    mat = assemble_dirac_matrix(n, m, quad)
    eig = np.linalg.eigvals(mat)
    lam = m + n / 2
    computed = np.sort(eig.real)
    half = mat.shape[0] // 2
    expected = np.concatenate([np.full(half, -lam), np.full(mat.shape[0] - half, lam)])
    err = max(float(np.max(np.abs(computed - expected))), float(np.max(np.abs(eig.imag))))
    n_pos = int(np.sum(computed > 0))
    return {
        "m": m,
        "expected": [-lam, lam],
        "dimension": int(mat.shape[0]),
        "positive": n_pos,
        "negative": int(mat.shape[0] - n_pos),
        "balanced": n_pos * 2 == mat.shape[0],
        "max_abs_error": err,
        "eigenvalues": computed.tolist(),
    }


def spectrum_report(n: int, m_max: int, quad_degree: int | None = None) -> SpectrumReport:
    """Eigenvalues of the assembled operator for every degree up to ``m_max``."""
    degree = 2 * m_max + 2 if quad_degree is None else quad_degree
    if degree < 2 * m_max + 2:
        raise QuadratureError(f"quadrature degree {degree} too low; need at least {2 * m_max + 2}")
    quad = build_quadrature(n, degree)
    blocks = [block_spectrum(n, m, quad) for m in range(m_max + 1)]
    computed, expected = [], []
    for b in blocks:
        computed.extend(b["eigenvalues"])
        lam = b["expected"][1]
        expected.extend([-lam] * (b["dimension"] // 2) + [lam] * (b["dimension"] - b["dimension"] // 2))
    summary = [{k: v for k, v in b.items() if k != "eigenvalues"} for b in blocks]
    return SpectrumReport(
        n=n,
        m_max=m_max,
        computed_eigenvalues=computed,
        expected=expected,
        max_abs_error=max(b["max_abs_error"] for b in blocks),
        per_degree=summary,
    )


# spectral calculus


def spinorial_laplacian_spectral(coeffs: SpectralCoeffs, d: int) -> SpectralCoeffs:
    """Order-d spinorial Laplacian: scales the degree-m block by ``(m + n/2)**(2d)``."""
    if d < 1:
        raise ValueError("order d must be a positive integer")
    if coeffs.basis_id != "PQ":
        raise ValueError("the spinorial Laplacian acts blockwise on monogenic (PQ) coefficients")
    n = coeffs.n
    return coeffs.map_degrees(lambda m: (m + n / 2) ** (2 * d))


def project_Ta(coeffs: SpectralCoeffs, a: int) -> SpectralCoeffs:
    """Orthogonal projection onto degrees ``<= a``."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    return coeffs.map_degrees(lambda m: 1.0 if m <= a else 0.0)


def kernel_projection(f, n: int, a: int, quad: QuadratureRule, points, degree=None) -> np.ndarray:
    """``T_a f`` at ``points`` via ``int f(nu) G_a(omega, nu) dS(nu)``."""
    deg = degree if degree is not None else getattr(f, "degree", None)
    if deg is None:
        raise QuadratureError("cannot certify the quadrature: degree of f unknown")
    quad.require(max(deg, 0) + a)
    fv = f.evaluate(quad.nodes) if hasattr(f, "evaluate") else np.asarray(f, dtype=float)
    pts = np.asarray(points, dtype=float)
    kern = reproducing_kernel(n, a, pts[:, None, :], quad.nodes[None, :, :])
    return (kern * quad.weights[None, :]) @ fv


def sobolev_norm(coeffs: SpectralCoeffs, spec: SobolevSpec) -> float:
    if coeffs.n != spec.n:
        raise ValueError("coefficients and Sobolev spec disagree on n")
    total = 0.0
    for (m, _), v in coeffs.sorted_items():
        total += spec.weight(m) * float(np.sum(v.coeffs**2))
    return math.sqrt(total)


# embedding estimates


def _random_coeffs(rng, n: int, degrees, scale_by_degree: bool = True) -> SpectralCoeffs:
    size = 1 << (n + 1)
    entries = {}
    for m in degrees:
        amp = rng.uniform(0.05, 1.0) if scale_by_degree else 1.0
        for k in range(1, harmonic_dimension(n, m) + 1):
            entries[(m, k)] = Multivector(n + 1, amp * rng.standard_normal(size))
    return SpectralCoeffs(n, "H", entries)


def _random_support(rng, lo: int, hi: int) -> list[int]:
    degrees = [m for m in range(lo, hi + 1) if rng.random() < 0.6]
    return degrees or [int(rng.integers(lo, hi + 1))]


def _roundtrip(coeffs: SpectralCoeffs, bases, quad: QuadratureRule, max_degree: int) -> tuple:
    """Synthesize at the nodes and analyze again; returns (values, coefficients)."""
    vals = synthesize(coeffs, bases, quad.nodes)
    return vals, fourier_coefficients(vals, bases, quad, degree=max_degree)


def part3_tail_constant(n: int, a: int, s: float, truncation: int) -> float:
    """``sqrt(|S^n|^-1 sum_{m=a+1}^{M} N(n,m) / (m + (n-1)/2)**(2s))``."""
    total = sum(harmonic_dimension(n, m) / (m + (n - 1) / 2) ** (2 * s) for m in range(a + 1, truncation + 1))
    return math.sqrt(total / surface_area(n))


def verify_embedding_estimates(
    n: int,
    a: int,
    s: float,
    t: float,
    trials: int,
    seed: int = 0,
    tail: int = 6,
    tol: float = 1e-9,
    parts=(1, 2, 3),
) -> dict:
    """Random and extremal tests of the three embedding estimates.

    Part 1: ``|phi|_s <= (a + (n-1)/2)**s |phi|_0`` for phi of degree <= a.
    Part 2: ``|phi|_t <= (a + 1 + (n-1)/2)**(t-s) |phi|_s`` for phi orthogonal
    to degrees <= a.
    Part 3: ``sup |phi| <= |phi|_s * part3_tail_constant`` for phi supported
    on degrees a+1 .. a+tail.

    Every ratio left/right must be ``<= 1 + tol``. Single-degree witnesses
    (degree a for part 1, a+1 for part 2) attain ratio 1.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not s >= t >= 0:
        raise ValueError(f"need s >= t >= 0, got s={s}, t={t}")
    rng = np.random.default_rng(seed)
    top = a + tail
    bases = harmonic_bases(n, top)
    quad = build_quadrature(n, 2 * top)
    spec_s, spec_t, spec_0 = SobolevSpec(s, n), SobolevSpec(t, n), SobolevSpec(0.0, n)
    report: dict = {"n": n, "a": a, "s": s, "t": t, "trials": trials, "seed": seed, "tail": tail}

    if 1 in parts:
        const = (a + (n - 1) / 2) ** s
        ratios = []
        for _ in range(trials):
            _, c = _roundtrip(_random_coeffs(rng, n, _random_support(rng, 0, a)), bases, quad, top)
            ratios.append(sobolev_norm(c, spec_s) / (const * sobolev_norm(c, spec_0)))
        _, w = _roundtrip(_random_coeffs(rng, n, [a]), bases, quad, top)
        witness = sobolev_norm(w, spec_s) / (const * sobolev_norm(w, spec_0))
        report["part1"] = {
            "constant": const,
            "max_ratio": max(ratios),
            "witness_ratio": witness,
            "passed": max(ratios) <= 1 + tol and witness <= 1 + tol,
        }

    if 2 in parts:
        const = (a + 1 + (n - 1) / 2) ** (t - s)
        ratios = []
        for _ in range(trials):
            _, c = _roundtrip(_random_coeffs(rng, n, _random_support(rng, a + 1, top)), bases, quad, top)
            ratios.append(sobolev_norm(c, spec_t) / (const * sobolev_norm(c, spec_s)))
        _, w = _roundtrip(_random_coeffs(rng, n, [a + 1]), bases, quad, top)
        witness = sobolev_norm(w, spec_t) / (const * sobolev_norm(w, spec_s))
        report["part2"] = {
            "constant": const,
            "max_ratio": max(ratios),
            "witness_ratio": witness,
            "passed": max(ratios) <= 1 + tol and witness <= 1 + tol,
        }

    if 3 in parts:
        const = part3_tail_constant(n, a, s, top)
        ratios = []
        for _ in range(trials):
            c = _random_coeffs(rng, n, _random_support(rng, a + 1, top))
            vals, c2 = _roundtrip(c, bases, quad, top)
            sup = float(np.max(np.linalg.norm(vals, axis=1)))
            ratios.append(sup / (const * sobolev_norm(c2, spec_s)))
        report["part3"] = {
            "constant": const,
            "max_ratio": max(ratios),
            "grid_nodes": len(quad),
            "passed": max(ratios) <= 1 + tol,
        }
    report["passed"] = all(report[f"part{p}"]["passed"] for p in parts)
    return report


def compactness_bounds(n: int, s: float, t: float, a_max: int) -> list[float]:
    """Operator-norm bounds ``(a + 1 + (n-1)/2)**(t-s)`` of ``I - T_a`` from L2_s to L2_t."""
    return [(a + 1 + (n - 1) / 2) ** (t - s) for a in range(a_max + 1)]


# Cauchy theorem and integral formula


def random_monogenic(rng: np.random.Generator, n: int, m: int, right: bool = False) -> MVPolynomial:
    """Random homogeneous left (or right) monogenic polynomial of degree ``m``.

    Right monogenics are Clifford conjugates of left ones.
    """
    basis = monogenic_basis(n, m)
    weights = rng.standard_normal((1, len(basis)))
    p = poly.linear_combination(basis.elements, weights)[0]
    return p.conjugate() if right else p


def _require_monogenic(f: MVPolynomial, side: str) -> None:
    op = poly.dirac_apply if side == "left" else poly.dirac_apply_right
    res = op(f).max_abs_coeff()
    if res >= MONOGENIC_TOL:
        raise ValueError(f"input is not {side} monogenic (residual {res:.3e})")


def verify_cauchy_theorem(n: int, f: MVPolynomial, g: MVPolynomial, quad: QuadratureRule) -> float:
    """``|int_{S^n} g(w) w f(w) dS|`` for left monogenic ``f`` and right monogenic ``g``."""
    if f.ambient_dim != n + 1 or g.ambient_dim != n + 1 or quad.n != n:
        raise ValueError("dimension mismatch between inputs and quadrature")
    _require_monogenic(f, "left")
    _require_monogenic(g, "right")
    quad.require(max(f.degree, 0) + max(g.degree, 0) + 1)
    nodes = quad.nodes
    integrand = clifford.batch_product(
        clifford.batch_product(g.evaluate(nodes), clifford.vector_coeffs(nodes)), f.evaluate(nodes)
    )
    return float(np.linalg.norm(quad.integrate(integrand)))


def cauchy_integral(f: MVPolynomial, y, quad: QuadratureRule, constant: float | None = None) -> Multivector:
    """``c int G(x - y) x f(x) dS(x)`` over the unit sphere bounding the ball."""
    y = np.asarray(y, dtype=float)
    if np.linalg.norm(y) >= CIF_MAX_RADIUS:
        raise ValueError(f"interior point must satisfy |y| < {CIF_MAX_RADIUS}")
    dim = quad.ambient_dim
    c = cauchy_constant(dim) if constant is None else constant
    nodes = quad.nodes
    kernel = cauchy_kernel_values(nodes - y[None, :])
    integrand = clifford.batch_product(
        clifford.batch_product(kernel, clifford.vector_coeffs(nodes)), f.evaluate(nodes)
    )
    return Multivector(dim, c * quad.integrate(integrand))


def calibrate_cauchy_constant(ambient_dim: int, degree: int = 30) -> float:
    """Constant making the Cauchy integral reproduce ``f = 1`` at the centre."""
    quad = build_quadrature(ambient_dim - 1, degree)
    one = MVPolynomial.constant(ambient_dim)
    raw = cauchy_integral(one, np.zeros(ambient_dim), quad, constant=1.0)
    return 1.0 / raw.coeffs[0]


def verify_cauchy_integral_formula(f: MVPolynomial, y, quad: QuadratureRule) -> float:
    """Frobenius distance between the Cauchy integral and ``f(y)``."""
    _require_monogenic(f, "left")
    value = cauchy_integral(f, y, quad)
    return float(np.linalg.norm(value.coeffs - poly.poly_eval(f, y).coeffs))


# addition theorem calibration


def random_unit_vectors(rng: np.random.Generator, count: int, ambient_dim: int) -> np.ndarray:
    x = rng.standard_normal((count, ambient_dim))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def addition_residuals(n: int, m: int, omega: np.ndarray, nu: np.ndarray) -> dict:
    """Max deviation of ``sum_k Y_mk(w) Y_mk(v)`` from the Gegenbauer kernel at ``+t`` and ``-t``."""
    basis = orthonormal_basis(n, m, "H")
    yw = basis.evaluate(omega)[:, :, 0]
    yv = basis.evaluate(nu)[:, :, 0]
    direct = np.sum(yw * yv, axis=0)
    t = np.sum(omega * nu, axis=1)
    lam = (n - 1) / 2
    scale = harmonic_dimension(n, m) / surface_area(n) / gegenbauer(m, lam, 1.0)
    return {
        sign: float(np.max(np.abs(direct - scale * gegenbauer(m, lam, sign * t)))) for sign in (1, -1)
    }


def calibrate_addition_sign(n: int, m_max: int, pairs: int = 50, seed: int = 0) -> dict:
    """Decide the sign of the Gegenbauer argument from basis sums.

    Degree 0 is sign-blind; odd degrees separate the two choices.
    """
    rng = np.random.default_rng(seed)
    omega = random_unit_vectors(rng, pairs, n + 1)
    nu = random_unit_vectors(rng, pairs, n + 1)
    worst = {1: 0.0, -1: 0.0}
    for m in range(m_max + 1):
        r = addition_residuals(n, m, omega, nu)
        for sign in worst:
            worst[sign] = max(worst[sign], r[sign])
    sign = 1 if worst[1] <= worst[-1] else -1
    return {"sign": sign, "residual_plus": worst[1], "residual_minus": worst[-1]}
