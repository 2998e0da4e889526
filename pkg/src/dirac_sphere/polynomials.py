"""Polynomials in x_1..x_N with Clifford-valued coefficients, and the first
order operators acting on them (Dirac, Euler, Gamma, Laplacian).

Coefficients multiply monomials from the right, ``p(x) = sum_a x^a c_a``; since
monomials are real the side is immaterial for evaluation, but operators such
as ``dirac_apply`` act on the coefficient from the left.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from . import clifford
from .clifford import Multivector


@lru_cache(maxsize=None)
def monomial_exponents(ambient_dim: int, degree: int) -> np.ndarray:
    """All exponent vectors of total ``degree`` in lexicographically descending order."""
    if degree < 0:
        return np.zeros((0, ambient_dim), dtype=np.int64)
    rows = []
    for combo in itertools.combinations_with_replacement(range(ambient_dim), degree):
        e = [0] * ambient_dim
        for i in combo:
            e[i] += 1
        rows.append(e)
    exps = np.array(rows, dtype=np.int64).reshape(-1, ambient_dim)
    exps.setflags(write=False)
    return exps


class MVPolynomial:
    """Immutable polynomial with multivector coefficients.

    Parameters
    ----------
    ambient_dim : int
        Number of variables ``N``; coefficients live in ``Cl_N``.
    exponents : array_like, shape (T, N)
        Nonnegative integer exponent rows.
    coeffs : array_like, shape (T, 2**N)
        Blade coefficients of each term.

    Duplicate exponent rows are summed, terms with an all-zero coefficient are
    dropped and rows are kept sorted so iteration order is deterministic.
    """

    __slots__ = ("ambient_dim", "exponents", "coeffs")

    def __init__(self, ambient_dim: int, exponents=None, coeffs=None):
        size = 1 << ambient_dim
        if exponents is None:
            exps = np.zeros((0, ambient_dim), dtype=np.int64)
            cf = np.zeros((0, size))
        else:
            exps = np.asarray(exponents, dtype=np.int64).reshape(-1, ambient_dim)
            cf = np.asarray(coeffs, dtype=float).reshape(-1, size)
        if exps.shape[0] != cf.shape[0]:
            raise ValueError("exponents and coeffs disagree on the number of terms")
        if np.any(exps < 0):
            raise ValueError("exponents must be nonnegative")
        if exps.shape[0]:
            uniq, inverse = np.unique(exps, axis=0, return_inverse=True)
            summed = np.zeros((uniq.shape[0], size))
            np.add.at(summed, inverse.reshape(-1), cf)
            keep = np.any(summed != 0.0, axis=1)
            exps, cf = uniq[keep], summed[keep]
        exps.setflags(write=False)
        cf.setflags(write=False)
        object.__setattr__(self, "ambient_dim", int(ambient_dim))
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "coeffs", cf)

    def __setattr__(self, name, value):
        raise AttributeError("MVPolynomial is immutable")

    # construction helpers

    @classmethod
    def zero(cls, ambient_dim: int) -> "MVPolynomial":
        return cls(ambient_dim)

    @classmethod
    def constant(cls, ambient_dim: int, value=1.0) -> "MVPolynomial":
        return cls.monomial(ambient_dim, [0] * ambient_dim, value)

    @classmethod
    def monomial(cls, ambient_dim: int, exponents, value=1.0) -> "MVPolynomial":
        if isinstance(value, Multivector):
            c = value.coeffs
        else:
            c = Multivector.scalar(ambient_dim, float(value)).coeffs
        return cls(ambient_dim, [list(exponents)], [c])

    @classmethod
    def variable(cls, ambient_dim: int, i: int) -> "MVPolynomial":
        """The coordinate ``x_i`` (1-based)."""
        e = [0] * ambient_dim
        e[i - 1] = 1
        return cls.monomial(ambient_dim, e)

    @classmethod
    def from_terms(cls, ambient_dim: int, terms: dict) -> "MVPolynomial":
        exps, cf = [], []
        for e, v in terms.items():
            exps.append(list(e))
            cf.append(v.coeffs if isinstance(v, Multivector) else Multivector.scalar(ambient_dim, v).coeffs)
        if not exps:
            return cls(ambient_dim)
        return cls(ambient_dim, exps, cf)

    # inspection

    @property
    def n_terms(self) -> int:
        return self.exponents.shape[0]

    def is_zero(self) -> bool:
        return self.n_terms == 0

    @property
    def degree(self) -> int:
        """Maximal total degree; ``-1`` for the zero polynomial."""
        if self.is_zero():
            return -1
        return int(self.exponents.sum(axis=1).max())

    def homogeneous_degree(self):
        """Common total degree of all terms, or ``None`` if mixed or zero."""
        if self.is_zero():
            return None
        d = np.unique(self.exponents.sum(axis=1))
        return int(d[0]) if d.size == 1 else None

    def terms(self):
        for e, c in zip(self.exponents, self.coeffs):
            yield tuple(int(v) for v in e), Multivector(self.ambient_dim, c)

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self.coeffs), initial=0.0))

    def homogeneous_part(self, degree: int) -> "MVPolynomial":
        keep = self.exponents.sum(axis=1) == degree
        return MVPolynomial(self.ambient_dim, self.exponents[keep], self.coeffs[keep])

    # arithmetic

    def _check(self, other: "MVPolynomial"):
        if other.ambient_dim != self.ambient_dim:
            raise ValueError(f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}")

    def __add__(self, other):
        if not isinstance(other, MVPolynomial):
            return NotImplemented
        self._check(other)
        return MVPolynomial(
            self.ambient_dim,
            np.vstack([self.exponents, other.exponents]),
            np.vstack([self.coeffs, other.coeffs]),
        )

    def __neg__(self):
        return MVPolynomial(self.ambient_dim, self.exponents, -self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, MVPolynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if np.isscalar(other):
            return MVPolynomial(self.ambient_dim, self.exponents, self.coeffs * float(other))
        if isinstance(other, Multivector):
            return self.mul_right(other)
        if isinstance(other, MVPolynomial):
            return self.product(other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return self * other
        if isinstance(other, Multivector):
            return self.mul_left(other)
        return NotImplemented

    def mul_left(self, a: Multivector) -> "MVPolynomial":
        """``a * p`` with ``a`` a constant multivector."""
        return MVPolynomial(self.ambient_dim, self.exponents, self.coeffs @ clifford.left_matrix(a.coeffs).T)

    def mul_right(self, a: Multivector) -> "MVPolynomial":
        return MVPolynomial(self.ambient_dim, self.exponents, self.coeffs @ clifford.right_matrix(a.coeffs).T)

    def product(self, other: "MVPolynomial") -> "MVPolynomial":
        """Geometric product of two polynomials."""
        self._check(other)
        if self.is_zero() or other.is_zero():
            return MVPolynomial(self.ambient_dim)
        exps = (self.exponents[:, None, :] + other.exponents[None, :, :]).reshape(-1, self.ambient_dim)
        cf = clifford.batch_product(self.coeffs[:, None, :], other.coeffs[None, :, :])
        return MVPolynomial(self.ambient_dim, exps, cf.reshape(-1, 1 << self.ambient_dim))

    def conjugate(self) -> "MVPolynomial":
        return MVPolynomial(self.ambient_dim, self.exponents, clifford.batch_conjugate(self.coeffs))

    def partial(self, i: int) -> "MVPolynomial":
        """Derivative with respect to ``x_{i+1}`` (0-based ``i``)."""
        e = self.exponents[:, i]
        keep = e > 0
        exps = self.exponents[keep].copy()
        exps[:, i] -= 1
        return MVPolynomial(self.ambient_dim, exps, self.coeffs[keep] * e[keep, None])

    # evaluation

    def evaluate(self, points) -> np.ndarray:
        """Values at ``points`` of shape ``(P, N)``; returns ``(P, 2**N)``."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.ambient_dim:
            raise ValueError(f"points must have shape (P, {self.ambient_dim})")
        if self.is_zero():
            return np.zeros((pts.shape[0], 1 << self.ambient_dim))
        mono = monomial_values(pts, self.exponents)
        return mono @ self.coeffs

    def __call__(self, x) -> Multivector:
        return poly_eval(self, x)

    # serialization

    def to_records(self) -> list:
        return [
            {"exps": [int(v) for v in e], "mv": [float(v) for v in c]}
            for e, c in zip(self.exponents, self.coeffs)
        ]

    @classmethod
    def from_records(cls, ambient_dim: int, records: list) -> "MVPolynomial":
        if not records:
            return cls(ambient_dim)
        exps = [r["exps"] for r in records]
        cf = [r["mv"] for r in records]
        if any(len(e) != ambient_dim for e in exps) or any(len(c) != 1 << ambient_dim for c in cf):
            raise ValueError("record shapes do not match ambient_dim")
        return cls(ambient_dim, exps, cf)

    def allclose(self, other: "MVPolynomial", atol: float = 1e-12) -> bool:
        return (self - other).max_abs_coeff() <= atol

    def __repr__(self):
        return f"MVPolynomial(N={self.ambient_dim}, terms={self.n_terms}, degree={self.degree})"


def monomial_values(points: np.ndarray, exponents: np.ndarray) -> np.ndarray:
    """``points[p] ** exponents[t]`` multiplied over coordinates, shape ``(P, T)``."""
    out = np.ones((points.shape[0], exponents.shape[0]))
    for i in range(points.shape[1]):
        col = exponents[:, i]
        if np.any(col):
            out *= points[:, i : i + 1] ** col[None, :]
    return out


def poly_eval(p: MVPolynomial, x) -> Multivector:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != p.ambient_dim:
        raise ValueError(f"point has {x.shape[0]} coordinates, polynomial has {p.ambient_dim} variables")
    return Multivector(p.ambient_dim, p.evaluate(x[None, :])[0])


def linear_combination(polys, weights) -> list[MVPolynomial]:
    """Rows of ``weights @ polys`` for real weights of shape ``(K_out, K_in)``."""
    polys = list(polys)
    weights = np.asarray(weights, dtype=float)
    if not polys:
        return []
    dim = polys[0].ambient_dim
    all_exps = np.vstack([p.exponents for p in polys])
    if all_exps.shape[0] == 0:
        return [MVPolynomial(dim) for _ in range(weights.shape[0])]
    uniq, inverse = np.unique(all_exps, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    dense = np.zeros((len(polys), uniq.shape[0], 1 << dim))
    start = 0
    for j, p in enumerate(polys):
        rows = inverse[start : start + p.n_terms]
        dense[j, rows] = p.coeffs
        start += p.n_terms
    combined = np.tensordot(weights, dense, axes=(1, 0))
    return [MVPolynomial(dim, uniq, c) for c in combined]


def dirac_apply(p: MVPolynomial) -> MVPolynomial:
    """Left Dirac operator ``sum_i e_i d_i p``."""
    mats = clifford.generator_left_matrices(p.ambient_dim)
    out = MVPolynomial(p.ambient_dim)
    for i in range(p.ambient_dim):
        d = p.partial(i)
        out = out + MVPolynomial(p.ambient_dim, d.exponents, d.coeffs @ mats[i].T)
    return out


def dirac_apply_right(p: MVPolynomial) -> MVPolynomial:
    """Right Dirac operator ``sum_i (d_i p) e_i``."""
    mats = clifford.generator_right_matrices(p.ambient_dim)
    out = MVPolynomial(p.ambient_dim)
    for i in range(p.ambient_dim):
        d = p.partial(i)
        out = out + MVPolynomial(p.ambient_dim, d.exponents, d.coeffs @ mats[i].T)
    return out


def laplacian_apply(p: MVPolynomial) -> MVPolynomial:
    out = MVPolynomial(p.ambient_dim)
    for i in range(p.ambient_dim):
        out = out + p.partial(i).partial(i)
    return out


def euler_apply(p: MVPolynomial) -> MVPolynomial:
    """``sum_i x_i d_i p``: scales each term by its total degree."""
    deg = p.exponents.sum(axis=1)
    return MVPolynomial(p.ambient_dim, p.exponents, p.coeffs * deg[:, None])


def vector_multiply(p: MVPolynomial) -> MVPolynomial:
    """Left multiplication by the vector polynomial ``x = sum_i x_i e_i``."""
    mats = clifford.generator_left_matrices(p.ambient_dim)
    exps, cf = [], []
    for i in range(p.ambient_dim):
        shifted = p.exponents.copy()
        shifted[:, i] += 1
        exps.append(shifted)
        cf.append(p.coeffs @ mats[i].T)
    if p.is_zero():
        return MVPolynomial(p.ambient_dim)
    return MVPolynomial(p.ambient_dim, np.vstack(exps), np.vstack(cf))


def gamma_apply(p: MVPolynomial) -> MVPolynomial:
    """Angular Dirac (Gamma) operator via the polar split ``Gamma = -x D - E``.

    On the unit sphere this agrees with the angular operator applied to the
    restriction of ``p``: every homogeneous component is its own degree-m
    extension, and ``-x D - E`` commutes with radial scaling.
    """
    return -vector_multiply(dirac_apply(p)) - euler_apply(p)


def random_polynomial(
    rng: np.random.Generator,
    ambient_dim: int,
    degree: int,
    homogeneous: bool = False,
    scalar: bool = False,
    density: float = 1.0,
) -> MVPolynomial:
    """Random polynomial with standard normal coefficients.

    ``density`` keeps each term with that probability, which keeps high
    degree samples cheap.
    """
    degrees = [degree] if homogeneous else range(degree + 1)
    exps = np.vstack([monomial_exponents(ambient_dim, d) for d in degrees])
    size = 1 << ambient_dim
    cf = rng.standard_normal((exps.shape[0], size))
    if scalar:
        cf[:, 1:] = 0.0
    if density < 1.0:
        mask = rng.random(exps.shape[0]) < density
        exps, cf = exps[mask], cf[mask]
    return MVPolynomial(ambient_dim, exps, cf)
