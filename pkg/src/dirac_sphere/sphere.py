"""Integration on the unit sphere S^n in R^(n+1).

Quadrature is a product rule in hyperspherical angles: Gauss rules for the
Gegenbauer weights of the polar angles and the trapezoidal rule in the
azimuth. Also houses the L2 pairings and the Fourier layer built on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import clifford
from .clifford import Multivector


class QuadratureError(ValueError):
    """The quadrature rule is not exact to the degree an integrand needs."""


def surface_area(n: int) -> float:
    """Area of the unit sphere S^n, ``2 pi^((n+1)/2) / Gamma((n+1)/2)``."""
    if n < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {n}")
    return 2.0 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2)


def sphere_moment(exponents) -> float:
    """Exact ``int_{S^n} x^a dS`` for the exponent vector ``a`` (length n+1).

    Zero if any exponent is odd, else ``2 prod Gamma(b_i) / Gamma(sum b_i)``
    with ``b_i = (a_i + 1) / 2``.
    """
    a = [int(v) for v in exponents]
    if any(v % 2 for v in a):
        return 0.0
    b = [(v + 1) / 2 for v in a]
    return 2.0 * math.exp(sum(math.lgamma(v) for v in b) - math.lgamma(sum(b)))


def gauss_gegenbauer(npts: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss rule for the weight ``(1 - t**2)**alpha`` on [-1, 1].

    Golub-Welsch: eigen-decomposition of the symmetric Jacobi matrix of the
    monic recurrence ``p_{k+1} = t p_k - beta_k p_{k-1}``.
    """
    if npts < 1:
        raise ValueError("need at least one node")
    if alpha <= -1:
        raise ValueError("alpha must exceed -1")
    lam = alpha + 0.5
    mu0 = math.sqrt(math.pi) * math.exp(math.lgamma(alpha + 1) - math.lgamma(alpha + 1.5))
    k = np.arange(1, npts, dtype=float)
    beta = k * (k + 2 * lam - 1) / (4 * (k + lam) * (k + lam - 1))
    nodes, vecs = eigh_tridiagonal(np.zeros(npts), np.sqrt(beta))
    weights = mu0 * vecs[0, :] ** 2
    # symmetrize against rounding so odd moments vanish to the last bit
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    return nodes, weights


@dataclass(frozen=True)
class QuadratureRule:
    n: int
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int

    @property
    def ambient_dim(self) -> int:
        return self.n + 1

    def __len__(self) -> int:
        return self.weights.shape[0]

    def require(self, degree: int) -> None:
        if degree > self.exact_degree:
            raise QuadratureError(
                f"integrand of degree {degree} needs a rule exact to >= {degree}; "
                f"this rule is exact to {self.exact_degree}"
            )

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Weighted sum over the leading (node) axis."""
        return np.tensordot(self.weights, values, axes=(0, 0))


@lru_cache(maxsize=64)
def build_quadrature(n: int, degree: int) -> QuadratureRule:
    """Product rule on S^n exact for polynomials of total degree <= ``degree``."""
    if n < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {n}")
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    n_polar = math.ceil((degree + 2) / 2)
    n_azim = degree + 2
    phi = 2 * math.pi * np.arange(n_azim) / n_azim
    # start on the circle S^1 and prepend one polar angle per step
    nodes = np.stack([np.cos(phi), np.sin(phi)], axis=1)
    weights = np.full(n_azim, 2 * math.pi / n_azim)
    for sub_dim in range(2, n + 1):
        t, w = gauss_gegenbauer(n_polar, (sub_dim - 2) / 2)
        s = np.sqrt(1 - t**2)
        nodes = np.concatenate(
            [t[:, None, None].repeat(nodes.shape[0], 1), s[:, None, None] * nodes[None, :, :]],
            axis=2,
        ).reshape(-1, sub_dim + 1)
        weights = (w[:, None] * weights[None, :]).reshape(-1)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(n=n, nodes=nodes, weights=weights, exact_degree=degree)


def _values(f, nodes: np.ndarray) -> np.ndarray:
    if hasattr(f, "evaluate"):
        return f.evaluate(nodes)
    if callable(f):
        return np.asarray(f(nodes), dtype=float)
    return np.asarray(f, dtype=float)


def _degree(f):
    return getattr(f, "degree", None)


def _require_pair(quad: QuadratureRule, f, g) -> None:
    df, dg = _degree(f), _degree(g)
    if isinstance(df, int) and isinstance(dg, int):
        quad.require(max(df, 0) + max(dg, 0))


def clifford_inner_product(f, g, quad: QuadratureRule) -> Multivector:
    """``int conj(f) g dS`` as a multivector.

    ``f`` and ``g`` are polynomials (anything with ``evaluate``), callables
    mapping nodes to ``(P, 2**N)`` arrays, or such arrays at ``quad.nodes``.
    """
    _require_pair(quad, f, g)
    fv, gv = _values(f, quad.nodes), _values(g, quad.nodes)
    integrand = clifford.batch_product(clifford.batch_conjugate(fv), gv)
    return Multivector(quad.ambient_dim, quad.integrate(integrand))


def real_inner_product(f, g, quad: QuadratureRule) -> float:
    """Blade-componentwise pairing ``int sum_A f_A g_A dS``."""
    _require_pair(quad, f, g)
    fv, gv = _values(f, quad.nodes), _values(g, quad.nodes)
    return float(quad.integrate(np.sum(fv * gv, axis=1)))


def l2_norm(f, quad: QuadratureRule) -> float:
    return math.sqrt(max(real_inner_product(f, f, quad), 0.0))


@dataclass
class SpectralCoeffs:
    """Finitely supported coefficients ``entries[(m, k)]`` with 1-based ``k``.

    With ``basis_id == "H"`` the basis functions are real scalar harmonics
    ``Y_mk`` and ``f = sum Y_mk * entries[(m, k)]`` with multivector entries.
    With ``basis_id == "PQ"`` the basis is the real-orthonormal system of
    ``P_m + omega P_m`` blocks and only scalar parts of entries are used.
    """

    n: int
    basis_id: str = "H"
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.basis_id not in ("H", "PQ"):
            raise ValueError(f"unknown basis id {self.basis_id!r}")
        for (m, k), v in self.entries.items():
            if m < 0 or k < 1:
                raise ValueError(f"invalid index {(m, k)}")
            if not isinstance(v, Multivector) or v.ambient_dim != self.n + 1:
                raise ValueError(f"entry {(m, k)} is not a Cl_{self.n + 1} multivector")

    @property
    def ambient_dim(self) -> int:
        return self.n + 1

    def degrees(self) -> list[int]:
        return sorted({m for m, _ in self.entries})

    def sorted_items(self):
        return sorted(self.entries.items())

    def max_degree(self) -> int:
        return max((m for m, _ in self.entries), default=-1)

    def l2_norm(self) -> float:
        return math.sqrt(sum(float(np.sum(v.coeffs**2)) for v in self.entries.values()))

    def map_degrees(self, fn) -> "SpectralCoeffs":
        """New coefficients with ``entries[(m, k)] * fn(m)``; zero factors drop the entry."""
        out = {}
        for (m, k), v in self.entries.items():
            factor = fn(m)
            if factor != 0:
                out[(m, k)] = v * factor
        return SpectralCoeffs(self.n, self.basis_id, out)

    def __sub__(self, other: "SpectralCoeffs") -> "SpectralCoeffs":
        if other.n != self.n or other.basis_id != self.basis_id:
            raise ValueError("incompatible coefficient sets")
        out = dict(self.entries)
        zero = Multivector(self.ambient_dim)
        for key, v in other.entries.items():
            out[key] = out.get(key, zero) - v
        return SpectralCoeffs(self.n, self.basis_id, out)


def _basis_map(bases) -> dict:
    out = {}
    for b in bases:
        if b.m in out:
            raise ValueError(f"two bases for degree {b.m}")
        if not b.orthonormal:
            raise ValueError(f"basis for degree {b.m} is not orthonormal")
        out[b.m] = b
    return out


def fourier_coefficients(f, bases, quad: QuadratureRule, degree=None, drop_tol: float = 0.0) -> SpectralCoeffs:
    """Generalized Fourier coefficients of ``f`` against orthonormal bases.

    Scalar harmonic bases (space ``H``) yield multivector coefficients
    ``int Y_mk f dS``; any other basis yields the real pairing stored as a
    scalar multivector and the result is tagged ``PQ``. ``degree`` is the
    degree of ``f`` when it is not a polynomial; it is checked against the
    quadrature together with the highest basis degree. Entries whose
    Frobenius norm is ``<= drop_tol`` are omitted.
    """
    bases = list(bases)
    if not bases:
        raise ValueError("no bases given")
    by_m = _basis_map(bases)
    n = bases[0].n
    scalar = all(b.space == "H" for b in bases)
    deg_f = degree if degree is not None else _degree(f)
    if deg_f is None:
        raise QuadratureError("cannot certify the quadrature: degree of f unknown")
    quad.require(max(deg_f, 0) + max(b.function_degree for b in bases))
    fv = _values(f, quad.nodes)
    size = 1 << (n + 1)
    entries = {}
    for m in sorted(by_m):
        basis_vals = by_m[m].evaluate(quad.nodes)
        if scalar:
            coeffs = np.einsum("p,kp,pa->ka", quad.weights, basis_vals[:, :, 0], fv)
        else:
            coeffs = np.zeros((basis_vals.shape[0], size))
            coeffs[:, 0] = np.einsum("p,kpa,pa->k", quad.weights, basis_vals, fv)
        for k, c in enumerate(coeffs, start=1):
            if np.sqrt(np.sum(c**2)) > drop_tol:
                entries[(m, k)] = Multivector(n + 1, c)
    return SpectralCoeffs(n, "H" if scalar else "PQ", entries)


def clifford_coefficient(coeffs: SpectralCoeffs, m: int, k: int) -> Multivector:
    """Coefficient in the ``int conj(f) Y dS`` convention for a scalar ``Y``.

    Only the real convention carries reconstruction guarantees; this accessor
    exposes the conjugated form for callers who want it.
    """
    if coeffs.basis_id != "H":
        raise ValueError("Clifford-valued coefficients are defined for scalar harmonic bases only")
    v = coeffs.entries.get((m, k), Multivector(coeffs.ambient_dim))
    return clifford.conjugate(v)


def synthesize(coeffs: SpectralCoeffs, bases, points) -> np.ndarray:
    """Evaluate ``sum_mk b_mk(x) * entries[(m, k)]`` at ``points``."""
    by_m = {b.m: b for b in bases}
    pts = np.asarray(points, dtype=float)
    out = np.zeros((pts.shape[0], 1 << coeffs.ambient_dim))
    for m in coeffs.degrees():
        if m not in by_m:
            raise KeyError(f"no basis for degree {m}")
        vals = by_m[m].evaluate(pts)
        for (mm, k), c in coeffs.sorted_items():
            if mm != m:
                continue
            if k > vals.shape[0]:
                raise KeyError(f"index {(m, k)} outside a basis of size {vals.shape[0]}")
            out += vals[k - 1] @ clifford.right_matrix(c.coeffs).T
    return out
