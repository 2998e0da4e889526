"""Bases of spherical harmonics H_m, inner spherical monogenics P_m and
Q_m = omega P_m, built as explicit nullspaces and orthonormalized in L2(S^n)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg

from . import clifford
from . import polynomials as poly
from .polynomials import MVPolynomial, monomial_exponents
from .specfun import harmonic_dimension
from .sphere import QuadratureRule, build_quadrature

NULLSPACE_RCOND = 1e-10
DEPENDENCE_TOL = 1e-8

SPACES = ("H", "P", "Q")


class DependentBasisError(ValueError):
    def __init__(self, index: int, ratio: float):
        super().__init__(f"element {index} is numerically dependent on its predecessors (pivot ratio {ratio:.3e})")
        self.index = index


def monogenic_rank(n: int, m: int) -> int:
    """Rank of P_m as a right Cl_(n+1) module: ``binom(m+n-1, n-1)``."""
    return math.comb(m + n - 1, n - 1)


def clifford_dimension(n: int) -> int:
    return 2 ** (n + 1)


@dataclass(frozen=True)
class BasisSet:
    """A finite basis of H_m, P_m or Q_m on S^n.

    For ``space == "Q"`` the stored elements are P_m pre-images ``p``; the
    functions represented are ``x * p`` restricted to the sphere.
    """

    n: int
    m: int
    space: str
    elements: tuple
    orthonormal: bool = False
    quadrature_degree: int | None = None
    _values: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.space not in SPACES:
            raise ValueError(f"unknown space tag {self.space!r}")

    @property
    def ambient_dim(self) -> int:
        return self.n + 1

    @property
    def omega_multiplied(self) -> bool:
        return self.space == "Q"

    @property
    def degree(self) -> int:
        """Homogeneity label: ``m`` for H and P, ``-n-m`` for Q."""
        return -self.n - self.m if self.space == "Q" else self.m

    @property
    def function_degree(self) -> int:
        """Polynomial degree of the functions actually evaluated on the sphere."""
        return self.m + 1 if self.space == "Q" else self.m

    def __len__(self) -> int:
        return len(self.elements)

    def functions(self) -> list[MVPolynomial]:
        if self.omega_multiplied:
            return [poly.vector_multiply(p) for p in self.elements]
        return list(self.elements)

    def evaluate(self, points) -> np.ndarray:
        """Values of every function, shape ``(K, P, 2**N)``; memoized per point set."""
        pts = np.ascontiguousarray(points, dtype=float)
        key = (pts.shape, pts.tobytes())
        hit = self._values.get(key)
        if hit is not None:
            return hit
        funcs = self.functions()
        if not funcs:
            vals = np.zeros((0, pts.shape[0], 1 << self.ambient_dim))
        else:
            vals = evaluate_functions(funcs, pts)
        vals.setflags(write=False)
        if len(self._values) >= 8:
            self._values.pop(next(iter(self._values)))
        self._values[key] = vals
        return vals

    def check_invariants(self, quad: QuadratureRule | None = None, tol: float = 1e-9) -> None:
        """Raise ``ValueError`` if a defining property fails."""
        q = quad or build_quadrature(self.n, 2 * self.function_degree + 2)
        for i, p in enumerate(self.elements):
            if p.ambient_dim != self.ambient_dim:
                raise ValueError(f"element {i} has the wrong ambient dimension")
            if self.space == "H":
                res = poly.laplacian_apply(p).max_abs_coeff()
                if res > tol:
                    raise ValueError(f"H element {i} is not harmonic (residual {res:.3e})")
            else:
                vals = poly.dirac_apply(p).evaluate(q.nodes)
                res = float(np.max(np.linalg.norm(vals, axis=1), initial=0.0))
                if res > tol:
                    raise ValueError(f"{self.space} element {i} is not monogenic (residual {res:.3e})")
        if self.orthonormal and self.elements:
            gram = gram_matrix(self.functions(), q)
            dev = float(np.max(np.abs(gram - np.eye(len(self)))))
            if dev > tol:
                raise ValueError(f"Gram matrix deviates from identity by {dev:.3e}")


def evaluate_functions(funcs, points) -> np.ndarray:
    """Values of several polynomials at ``points``, shape ``(K, P, 2**N)``."""
    funcs = list(funcs)
    pts = np.asarray(points, dtype=float)
    size = 1 << funcs[0].ambient_dim
    out = np.zeros((len(funcs), pts.shape[0], size))
    all_exps = np.vstack([f.exponents for f in funcs])
    if all_exps.shape[0] == 0:
        return out
    uniq, inverse = np.unique(all_exps, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    mono = poly.monomial_values(pts, uniq)
    start = 0
    for k, f in enumerate(funcs):
        rows = inverse[start : start + f.n_terms]
        out[k] = mono[:, rows] @ f.coeffs
        start += f.n_terms
    return out


def gram_matrix(funcs, quad: QuadratureRule) -> np.ndarray:
    """Real L2 Gram matrix of polynomial functions on the sphere."""
    quad.require(2 * max(f.degree for f in funcs))
    vals = evaluate_functions(list(funcs), quad.nodes)
    weighted = vals * np.sqrt(quad.weights)[None, :, None]
    flat = weighted.reshape(len(funcs), -1)
    return flat @ flat.T


def laplacian_matrix(ambient_dim: int, m: int) -> np.ndarray:
    """Matrix of the Laplacian from scalar degree-m to degree-(m-2) monomials."""
    src = monomial_exponents(ambient_dim, m)
    dst = monomial_exponents(ambient_dim, m - 2)
    row = {tuple(e): i for i, e in enumerate(dst)}
    mat = np.zeros((dst.shape[0], src.shape[0]))
    for j, e in enumerate(src):
        lap = poly.laplacian_apply(MVPolynomial.monomial(ambient_dim, e))
        for ee, c in zip(lap.exponents, lap.coeffs):
            mat[row[tuple(ee)], j] = c[0]
    return mat


def dirac_matrix(ambient_dim: int, m: int) -> np.ndarray:
    """Real matrix of the left Dirac operator on Cl_N-valued degree-m polynomials.

    Columns are ordered (monomial, blade); rows (degree m-1 monomial, blade).
    """
    size = 1 << ambient_dim
    src = monomial_exponents(ambient_dim, m)
    dst = monomial_exponents(ambient_dim, m - 1)
    row = {tuple(e): i for i, e in enumerate(dst)}
    mat = np.zeros((dst.shape[0] * size, src.shape[0] * size))
    left = clifford.generator_left_matrices(ambient_dim)
    for j, e in enumerate(src):
        for i in range(ambient_dim):
            if e[i] == 0:
                continue
            lowered = e.copy()
            lowered[i] -= 1
            r = row[tuple(lowered)]
            mat[r * size : (r + 1) * size, j * size : (j + 1) * size] += e[i] * left[i]
    return mat


def nullspace(mat: np.ndarray, n_cols: int) -> np.ndarray:
    """Orthonormal nullspace columns; the full space when ``mat`` has no rows."""
    if mat.shape[0] == 0:
        return np.eye(n_cols)
    return scipy.linalg.null_space(mat, rcond=NULLSPACE_RCOND)


def harmonic_basis(n: int, m: int) -> BasisSet:
    """Scalar harmonic homogeneous polynomials of degree ``m`` in ``n+1`` variables.

    Elements are real-valued (coefficient on the identity blade only).
    """
    if n < 1 or m < 0:
        raise ValueError(f"need n >= 1 and m >= 0, got n={n}, m={m}")
    dim = n + 1
    exps = monomial_exponents(dim, m)
    null = nullspace(laplacian_matrix(dim, m), exps.shape[0])
    size = 1 << dim
    elements = []
    for col in null.T:
        cf = np.zeros((exps.shape[0], size))
        cf[:, 0] = col
        elements.append(MVPolynomial(dim, exps, cf))
    return BasisSet(n, m, "H", tuple(elements))


def monogenic_basis(n: int, m: int) -> BasisSet:
    """Real-linear basis of left monogenic homogeneous polynomials of degree ``m``."""
    if n < 1 or m < 0:
        raise ValueError(f"need n >= 1 and m >= 0, got n={n}, m={m}")
    dim = n + 1
    size = 1 << dim
    exps = monomial_exponents(dim, m)
    null = nullspace(dirac_matrix(dim, m), exps.shape[0] * size)
    elements = tuple(MVPolynomial(dim, exps, col.reshape(exps.shape[0], size)) for col in null.T)
    return BasisSet(n, m, "P", elements)


def q_basis_on_sphere(p_basis: BasisSet) -> BasisSet:
    """The functions ``omega * p`` for ``p`` in a P_m basis."""
    if p_basis.space != "P":
        raise ValueError(f"expected a P basis, got space {p_basis.space!r}")
    return BasisSet(
        p_basis.n, p_basis.m, "Q", p_basis.elements, p_basis.orthonormal, p_basis.quadrature_degree
    )


def orthonormalize(basis: BasisSet, quad: QuadratureRule) -> BasisSet:
    """Modified Gram-Schmidt (two passes) under the real L2(S^n) pairing.

    Raises
    ------
    QuadratureError
        If ``quad`` cannot integrate products of basis functions exactly.
    DependentBasisError
        If an element's residual pivot drops below ``1e-8`` times the
        largest input norm.
    """
    if not basis.elements:
        return BasisSet(basis.n, basis.m, basis.space, (), True, quad.exact_degree)
    quad.require(2 * basis.function_degree)
    k = len(basis)
    vals = basis.evaluate(quad.nodes) * np.sqrt(quad.weights)[None, :, None]
    vecs = vals.reshape(k, -1).copy()
    lead = float(np.max(np.linalg.norm(vecs, axis=1)))
    combo = np.eye(k)
    for i in range(k):
        for _ in range(2):
            for j in range(i):
                r = vecs[j] @ vecs[i]
                vecs[i] -= r * vecs[j]
                combo[i] -= r * combo[j]
        norm = float(np.linalg.norm(vecs[i]))
        if norm < DEPENDENCE_TOL * lead:
            raise DependentBasisError(i, norm / lead if lead else 0.0)
        vecs[i] /= norm
        combo[i] /= norm
    elements = tuple(poly.linear_combination(basis.elements, combo))
    return BasisSet(basis.n, basis.m, basis.space, elements, True, quad.exact_degree)


@lru_cache(maxsize=128)
def orthonormal_basis(n: int, m: int, space: str) -> BasisSet:
    """Cached orthonormal H, P or Q basis with a rule exact to twice its degree."""
    if space == "H":
        b = harmonic_basis(n, m)
    else:
        b = monogenic_basis(n, m)
    quad = build_quadrature(n, 2 * m + 2)
    b = orthonormalize(b, quad)
    return q_basis_on_sphere(b) if space == "Q" else b


def harmonic_bases(n: int, max_degree: int) -> list[BasisSet]:
    return [orthonormal_basis(n, m, "H") for m in range(max_degree + 1)]


def expected_dimensions(n: int, m: int) -> dict:
    """Combinatorial predictions for the real dimensions at degree ``m``."""
    cl = clifford_dimension(n)
    return {
        "H_scalar": harmonic_dimension(n, m),
        "H_real": harmonic_dimension(n, m) * cl,
        "P_rank": monogenic_rank(n, m),
        "P_real": monogenic_rank(n, m) * cl,
        "Q_real": monogenic_rank(n, m) * cl,
    }
