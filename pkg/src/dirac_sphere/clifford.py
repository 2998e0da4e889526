"""Real Clifford algebra Cl_N with negative-definite signature (e_i**2 = -1).

Multivectors are stored densely: ``coeffs[mask]`` is the coefficient of the
blade whose generators are the set bits of ``mask`` (bit ``i`` <-> ``e_{i+1}``),
in increasing generator order.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

MAX_AMBIENT_DIM = 8


def _reorder_sign(a: int, b: int) -> int:
    """Sign from sorting the concatenated generator word of blades ``a`` and ``b``."""
    swaps = 0
    a >>= 1
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1 if swaps & 1 else 1


@lru_cache(maxsize=None)
def product_table(ambient_dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Blade index and sign of ``e_A e_B`` for every pair of masks.

    Each annihilated generator pair contributes ``e_i e_i = -1``.
    """
    if not 0 <= ambient_dim <= MAX_AMBIENT_DIM:
        raise ValueError(f"ambient_dim must lie in [0, {MAX_AMBIENT_DIM}], got {ambient_dim}")
    size = 1 << ambient_dim
    index = np.empty((size, size), dtype=np.intp)
    sign = np.empty((size, size), dtype=float)
    for a in range(size):
        for b in range(size):
            s = _reorder_sign(a, b)
            if bin(a & b).count("1") & 1:
                s = -s
            index[a, b] = a ^ b
            sign[a, b] = s
    index.setflags(write=False)
    sign.setflags(write=False)
    return index, sign


@lru_cache(maxsize=None)
def structure_tensor(ambient_dim: int) -> np.ndarray:
    """``T[a, b, c]`` with ``(x y)_c = sum_ab x_a y_b T[a, b, c]``."""
    index, sign = product_table(ambient_dim)
    size = 1 << ambient_dim
    t = np.zeros((size, size, size))
    a, b = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    t[a, b, index] = sign
    t.setflags(write=False)
    return t


@lru_cache(maxsize=None)
def generator_left_matrices(ambient_dim: int) -> np.ndarray:
    """Matrices ``L[i]`` of left multiplication by ``e_{i+1}`` acting on coefficient vectors."""
    t = structure_tensor(ambient_dim)
    mats = np.stack([t[1 << i].T for i in range(ambient_dim)]) if ambient_dim else np.zeros((0, 1, 1))
    mats.setflags(write=False)
    return mats


@lru_cache(maxsize=None)
def generator_right_matrices(ambient_dim: int) -> np.ndarray:
    """Matrices ``R[i]`` of right multiplication by ``e_{i+1}``."""
    t = structure_tensor(ambient_dim)
    mats = np.stack([t[:, 1 << i].T for i in range(ambient_dim)]) if ambient_dim else np.zeros((0, 1, 1))
    mats.setflags(write=False)
    return mats


@lru_cache(maxsize=None)
def grades(ambient_dim: int) -> np.ndarray:
    g = np.array([bin(mask).count("1") for mask in range(1 << ambient_dim)])
    g.setflags(write=False)
    return g


@lru_cache(maxsize=None)
def conjugation_signs(ambient_dim: int) -> np.ndarray:
    """Clifford conjugation sign per blade: grade involution times reversion."""
    k = grades(ambient_dim)
    s = np.where(k % 2 == 1, -1.0, 1.0) * np.where((k * (k - 1) // 2) % 2 == 1, -1.0, 1.0)
    s.setflags(write=False)
    return s


def left_matrix(coeffs: np.ndarray) -> np.ndarray:
    """Matrix of ``y -> a y`` for the multivector with coefficient vector ``coeffs``."""
    n = int(np.log2(coeffs.shape[-1]))
    return np.tensordot(coeffs, structure_tensor(n), axes=(0, 0)).T


def right_matrix(coeffs: np.ndarray) -> np.ndarray:
    """Matrix of ``y -> y a``."""
    n = int(np.log2(coeffs.shape[-1]))
    return np.tensordot(coeffs, structure_tensor(n), axes=(0, 1)).T


def batch_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pointwise geometric product of coefficient arrays of shape ``(..., 2**N)``."""
    if a.shape[-1] != b.shape[-1]:
        raise ValueError("coefficient arrays belong to different algebras")
    n = int(np.log2(a.shape[-1]))
    return np.einsum("...a,...b,abc->...c", a, b, structure_tensor(n))


def batch_conjugate(a: np.ndarray) -> np.ndarray:
    n = int(np.log2(a.shape[-1]))
    return a * conjugation_signs(n)


def vector_coeffs(x: np.ndarray) -> np.ndarray:
    """Embed points ``x`` of shape ``(..., N)`` as grade-1 coefficient arrays."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    out = np.zeros(x.shape[:-1] + (1 << n,))
    for i in range(n):
        out[..., 1 << i] = x[..., i]
    return out


class Multivector:
    """Immutable element of Cl_N.

    Supports ``+``, ``-``, scalar multiplication and the geometric product via
    ``*``. Equality is exact; use :meth:`allclose` for tolerant comparisons.
    """

    __slots__ = ("ambient_dim", "coeffs")

    def __init__(self, ambient_dim: int, coeffs=None):
        size = 1 << ambient_dim
        if coeffs is None:
            arr = np.zeros(size)
        else:
            arr = np.array(coeffs, dtype=float).reshape(-1)
        if arr.shape != (size,):
            raise ValueError(f"expected {size} coefficients for ambient_dim={ambient_dim}, got {arr.shape[0]}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("multivector coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "ambient_dim", int(ambient_dim))
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    @classmethod
    def scalar(cls, ambient_dim: int, value: float = 1.0) -> "Multivector":
        c = np.zeros(1 << ambient_dim)
        c[0] = value
        return cls(ambient_dim, c)

    @classmethod
    def blade(cls, ambient_dim: int, mask: int, value: float = 1.0) -> "Multivector":
        if not 0 <= mask < (1 << ambient_dim):
            raise ValueError(f"blade mask {mask} out of range")
        c = np.zeros(1 << ambient_dim)
        c[mask] = value
        return cls(ambient_dim, c)

    @classmethod
    def generator(cls, ambient_dim: int, i: int) -> "Multivector":
        """The generator ``e_i`` (1-based)."""
        if not 1 <= i <= ambient_dim:
            raise ValueError(f"generator index {i} out of range 1..{ambient_dim}")
        return cls.blade(ambient_dim, 1 << (i - 1))

    @classmethod
    def vector(cls, x) -> "Multivector":
        x = np.asarray(x, dtype=float)
        return cls(x.shape[0], vector_coeffs(x))

    def _coerce(self, other) -> "Multivector":
        if isinstance(other, Multivector):
            if other.ambient_dim != self.ambient_dim:
                raise ValueError(
                    f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}"
                )
            return other
        if np.isscalar(other):
            return Multivector.scalar(self.ambient_dim, float(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.ambient_dim, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.ambient_dim, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Multivector(self.ambient_dim, -self.coeffs)

    def __mul__(self, other):
        if np.isscalar(other):
            return Multivector(self.ambient_dim, self.coeffs * float(other))
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return Multivector(self.ambient_dim, self.coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return Multivector(self.ambient_dim, self.coeffs / float(other))
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.ambient_dim, self.coeffs.tobytes()))

    def allclose(self, other, atol: float = 1e-12) -> bool:
        other = self._coerce(other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs), initial=0.0) <= atol)

    def __repr__(self):
        terms = []
        for mask in np.flatnonzero(self.coeffs):
            name = "".join(f"e{i + 1}" for i in range(self.ambient_dim) if mask >> i & 1) or "1"
            terms.append(f"{self.coeffs[mask]:+.6g}*{name}")
        return f"Multivector({' '.join(terms) or '0'})"


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")
    index, sign = product_table(a.ambient_dim)
    weights = (sign * np.outer(a.coeffs, b.coeffs)).ravel()
    out = np.bincount(index.ravel(), weights=weights, minlength=1 << a.ambient_dim)
    return Multivector(a.ambient_dim, out)


def conjugate(a: Multivector) -> Multivector:
    """Clifford conjugation, the anti-automorphism with ``e_i -> -e_i``."""
    return Multivector(a.ambient_dim, a.coeffs * conjugation_signs(a.ambient_dim))


def scalar_part(a: Multivector) -> float:
    return float(a.coeffs[0])


def grade_project(a: Multivector, k: int) -> Multivector:
    if not 0 <= k <= a.ambient_dim:
        raise ValueError(f"grade {k} out of range 0..{a.ambient_dim}")
    return Multivector(a.ambient_dim, np.where(grades(a.ambient_dim) == k, a.coeffs, 0.0))


def frobenius_norm(a: Multivector) -> float:
    return float(np.sqrt(np.sum(a.coeffs**2)))
