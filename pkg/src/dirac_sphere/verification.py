"""Numerical checks of the structural identities, each returning a record
``{name, claim, measured, bound, passed, ...}`` for JSON reports."""

from __future__ import annotations

import itertools

import numpy as np

from . import operators as ops
from . import polynomials as poly
from .clifford import Multivector, frobenius_norm
from .monogenics import (
    clifford_dimension,
    harmonic_bases,
    harmonic_basis,
    monogenic_basis,
    monogenic_rank,
    orthonormal_basis,
)
from .polynomials import MVPolynomial
from .specfun import ADDITION_ARGUMENT_SIGN, cauchy_constant, harmonic_dimension, reproducing_kernel
from .sphere import (
    build_quadrature,
    fourier_coefficients,
    sphere_moment,
    synthesize,
)


def _record(name: str, claim: str, measured: float, bound: float, strict: bool = True, **details) -> dict:
    passed = measured < bound if strict else measured <= bound
    return {"name": name, "claim": claim, "measured": float(measured), "bound": float(bound),
            "passed": bool(passed), **details}


def check_clifford_relations(n: int, seed: int = 0, samples: int = 20, tol: float = 1e-12) -> dict:
    dim = n + 1
    e = [Multivector.generator(dim, i) for i in range(1, dim + 1)]
    worst = 0.0
    for i, j in itertools.product(range(dim), repeat=2):
        target = Multivector.scalar(dim, -2.0 if i == j else 0.0)
        worst = max(worst, frobenius_norm(e[i] * e[j] + e[j] * e[i] - target))
    rng = np.random.default_rng(seed)
    for x in rng.standard_normal((samples, dim)):
        v = Multivector.vector(x)
        worst = max(worst, frobenius_norm(v * v + Multivector.scalar(dim, float(x @ x))))
    return _record("clifford_relations", "e_j e_k + e_k e_j = -2 delta_jk and x^2 = -|x|^2", worst, tol)


def check_dirac_squared(ambient_dims, count: int = 100, max_degree: int = 5, seed: int = 0,
                        tol: float = 1e-10) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    dims = list(ambient_dims)
    for i in range(count):
        dim = dims[i % len(dims)]
        p = poly.random_polynomial(rng, dim, int(rng.integers(0, max_degree + 1)), density=0.5)
        res = (poly.laplacian_apply(p) + poly.dirac_apply(poly.dirac_apply(p))).max_abs_coeff()
        worst = max(worst, res)
    return _record("dirac_squared", "D^2 = -Laplacian on Clifford-valued polynomials", worst, tol,
                   samples=count, max_degree=max_degree)


def check_intertwining_pointwise(ns, count: int = 100, max_degree: int = 4, seed: int = 0,
                                 tol: float = 1e-9) -> dict:
    """``Gamma(w f) + w Gamma(f) - n w f`` at random unit points for random ``f``."""
    rng = np.random.default_rng(seed)
    ns = list(ns)
    worst = 0.0
    for i in range(count):
        n = ns[i % len(ns)]
        f = poly.random_polynomial(rng, n + 1, int(rng.integers(0, max_degree + 1)))
        wf = poly.vector_multiply(f)
        combo = poly.gamma_apply(wf) + poly.vector_multiply(poly.gamma_apply(f)) - wf * float(n)
        omega = ops.random_unit_vectors(rng, 1, n + 1)
        worst = max(worst, float(np.linalg.norm(combo.evaluate(omega))))
    return _record("intertwining_pointwise", "Gamma omega + omega Gamma = n omega", worst, tol, samples=count)


def check_intertwining_matrix(n: int, m_max: int, tol: float = 1e-8) -> dict:
    quad = build_quadrature(n, 2 * m_max + 2)
    worst = max(ops.intertwining_residual(n, m, quad) for m in range(m_max + 1))
    return _record("intertwining_matrix", "M_Gamma M_omega + M_omega M_Gamma = n M_omega on each block",
                   worst, tol)


def dimension_table(n: int, m_max: int) -> list[dict]:
    """Nullspace dimensions next to their combinatorial predictions."""
    cl = clifford_dimension(n)
    rows = []
    prev_p = 0
    for m in range(m_max + 1):
        h = len(harmonic_basis(n, m))
        p = len(monogenic_basis(n, m))
        rows.append({
            "n": n, "m": m,
            "H_scalar": h, "H_scalar_expected": harmonic_dimension(n, m),
            "P_real": p, "P_real_expected": monogenic_rank(n, m) * cl,
            "H_real": h * cl, "P_plus_Q_prev_real": p + prev_p,
        })
        prev_p = p
    return rows


def check_dimensions(ns, m_max: int) -> dict:
    mismatches = 0
    table = []
    for n in ns:
        for row in dimension_table(n, m_max):
            table.append(row)
            mismatches += row["H_scalar"] != row["H_scalar_expected"]
            mismatches += row["P_real"] != row["P_real_expected"]
            mismatches += row["H_real"] != row["P_plus_Q_prev_real"]
    return _record("dimensions", "nullspace dimensions equal the combinatorial counts; "
                   "dim H_m = dim P_m + dim omega P_(m-1)", mismatches, 0, strict=False, table=table)


def check_orthogonality(n: int, m_max: int, tol: float = 1e-9) -> dict:
    """Cross-degree inner products of harmonic and monogenic bases."""
    quad = build_quadrature(n, 2 * m_max + 2)
    worst = 0.0
    hb = harmonic_bases(n, m_max)
    for b1, b2 in itertools.combinations(hb, 2):
        v1, v2 = b1.evaluate(quad.nodes), b2.evaluate(quad.nodes)
        cross = np.einsum("p,ipa,jpa->ij", quad.weights, v1, v2)
        worst = max(worst, float(np.max(np.abs(cross))))
    blocks = [(orthonormal_basis(n, m, "P"), orthonormal_basis(n, m, "Q")) for m in range(m_max + 1)]
    funcs = [b for pair in blocks for b in pair]
    for b1, b2 in itertools.combinations(funcs, 2):
        cross = np.einsum("p,ipa,jpa->ij", quad.weights, b1.evaluate(quad.nodes), b2.evaluate(quad.nodes))
        worst = max(worst, float(np.max(np.abs(cross))))
    return _record("orthogonality", "harmonics of different degrees are orthogonal; "
                   "P_m and omega P_m are orthogonal", worst, tol)


def check_spectrum(n: int, m_max: int, tol: float = 1e-8) -> dict:
    report = ops.spectrum_report(n, m_max)
    return _record("spectrum", "eigenvalues of D_s are +-(m + n/2) with equal multiplicities",
                   report.max_abs_error, tol, degrees=report.per_degree)


def check_addition_theorem(n: int, m_max: int = 5, pairs: int = 50, seed: int = 0, tol: float = 1e-8) -> dict:
    cal = ops.calibrate_addition_sign(n, m_max, pairs, seed)
    measured = cal["residual_plus"] if ADDITION_ARGUMENT_SIGN == 1 else cal["residual_minus"]
    rec = _record("addition_theorem", "sum_k Y_mk(w) Y_mk(v) = N(n,m)/|S^n| C_m(s <w,v>)/C_m(1)",
                  measured, tol, argument_sign=ADDITION_ARGUMENT_SIGN, calibrated_sign=cal["sign"],
                  residual_plus=cal["residual_plus"], residual_minus=cal["residual_minus"], pairs=pairs)
    rec["passed"] = rec["passed"] and cal["sign"] == ADDITION_ARGUMENT_SIGN
    return rec


def random_harmonic_sum(rng, n: int, a: int, scalar: bool = False) -> MVPolynomial:
    """Random element of the harmonics of degree <= a with Clifford (or real) coefficients."""
    dim = n + 1
    out = MVPolynomial(dim)
    for basis in harmonic_bases(n, a):
        for y in basis.elements:
            c = rng.standard_normal(1 << dim)
            if scalar:
                c[1:] = 0.0
            out = out + y.mul_right(Multivector(dim, c))
    return out


def check_reproducing(n: int, a: int, functions: int = 20, points: int = 20, seed: int = 0,
                      tol: float = 1e-8) -> dict:
    rng = np.random.default_rng(seed)
    quad = build_quadrature(n, 2 * a)
    worst = 0.0
    for _ in range(functions):
        f = random_harmonic_sum(rng, n, a)
        omega = ops.random_unit_vectors(rng, points, n + 1)
        projected = ops.kernel_projection(f, n, a, quad, omega)
        worst = max(worst, float(np.max(np.linalg.norm(projected - f.evaluate(omega), axis=1))))
    return _record("reproducing_property", "(f, G_a(w, .)) = f(w) for f of degree <= a", worst, tol,
                   functions=functions, points=points, a=a)


def check_projection(n: int, a: int, functions: int = 20, points: int = 20, extra: int = 3, seed: int = 0,
                     tol: float = 1e-8, idempotence_tol: float = 1e-12) -> dict:
    """Kernel-integral and coefficient-truncation forms of T_a on scalar functions."""
    rng = np.random.default_rng(seed)
    top = a + extra
    bases = harmonic_bases(n, top)
    quad = build_quadrature(n, 2 * top)
    worst = 0.0
    idem = 0.0
    for _ in range(functions):
        f = poly.random_polynomial(rng, n + 1, top, scalar=True)
        omega = ops.random_unit_vectors(rng, points, n + 1)
        coeffs = fourier_coefficients(f, bases, quad)
        truncated = ops.project_Ta(coeffs, a)
        by_coeffs = synthesize(truncated, bases, omega)
        by_kernel = ops.kernel_projection(f, n, a, quad, omega)
        worst = max(worst, float(np.max(np.linalg.norm(by_coeffs - by_kernel, axis=1))))
        twice = ops.project_Ta(truncated, a) - truncated
        idem = max(idem, max((frobenius_norm(v) for v in twice.entries.values()), default=0.0))
    exact = build_quadrature(n, 2 * a)
    nodes, w = exact.nodes, exact.weights
    # discretized kernel operator is a projection once the rule integrates G_a G_a exactly
    k = reproducing_kernel(n, a, nodes[:, None, :], nodes[None, :, :]) * w[None, :]
    idem = max(idem, float(np.max(np.abs(k @ k - k))))
    rec = _record("projection", "kernel form of T_a equals coefficient truncation; T_a is idempotent",
                  worst, tol, idempotence=idem, idempotence_bound=idempotence_tol, a=a, functions=functions)
    rec["passed"] = rec["passed"] and idem < idempotence_tol
    return rec


def check_cauchy_theorem(n: int, max_degree: int = 2, seed: int = 0, tol: float = 1e-8) -> dict:
    rng = np.random.default_rng(seed)
    quad = build_quadrature(n, 2 * max_degree + 2)
    worst = 0.0
    for df, dg in itertools.product(range(max_degree + 1), repeat=2):
        f = ops.random_monogenic(rng, n, df)
        g = ops.random_monogenic(rng, n, dg, right=True)
        worst = max(worst, ops.verify_cauchy_theorem(n, f, g, quad))
    return _record("cauchy_theorem", "int g w f dS = 0 for g right and f left monogenic", worst, tol,
                   max_degree=max_degree)


def check_cauchy_integral_formula(n: int, max_degree: int = 2, points: int = 5, max_radius: float = 0.5,
                                  quad_degree: int = 40, seed: int = 0, tol: float = 1e-6) -> dict:
    rng = np.random.default_rng(seed)
    dim = n + 1
    calibrated = ops.calibrate_cauchy_constant(dim)
    quad = build_quadrature(n, quad_degree)
    worst = 0.0
    for d in range(max_degree + 1):
        f = ops.random_monogenic(rng, n, d)
        for _ in range(points):
            y = ops.random_unit_vectors(rng, 1, dim)[0] * rng.uniform(0.0, max_radius)
            worst = max(worst, ops.verify_cauchy_integral_formula(f, y, quad))
    # convergence trend at a fixed interior point
    f = ops.random_monogenic(rng, n, 1)
    y = np.zeros(dim)
    y[:3] = [0.3, 0.1, -0.2][:dim]
    coarse = ops.verify_cauchy_integral_formula(f, y, build_quadrature(n, 20))
    fine = ops.verify_cauchy_integral_formula(f, y, build_quadrature(n, 50))
    constant_dev = abs(calibrated - cauchy_constant(dim))
    rec = _record("cauchy_integral_formula", "f(y) = |S^n|^-1 int G(x - y) x f(x) dS(x) on the unit ball",
                  worst, tol, calibrated_constant=calibrated, constant_deviation=constant_dev,
                  error_degree_20=coarse, error_degree_50=fine, quad_degree=quad_degree)
    rec["passed"] = rec["passed"] and fine < coarse and constant_dev < 1e-12
    return rec


def check_sobolev(n: int, a: int, s: float, t: float, trials: int = 100, seed: int = 0, tol: float = 1e-9,
                  witness_tol: float = 1e-10) -> list[dict]:
    rep = ops.verify_embedding_estimates(n, a, s, t, trials, seed=seed, tol=tol, parts=(1, 2))
    out = []
    for part, claim in ((1, "|phi|_s <= (a + (n-1)/2)^s |phi|_0 on degrees <= a"),
                        (2, "|phi|_t <= (a + 1 + (n-1)/2)^(t-s) |phi|_s on degrees > a")):
        r = rep[f"part{part}"]
        rec = _record(f"sobolev_part{part}", claim, r["max_ratio"], 1 + tol, strict=False,
                      witness_ratio=r["witness_ratio"], constant=r["constant"], trials=trials,
                      n=n, a=a, s=s, t=t)
        rec["passed"] = rec["passed"] and abs(r["witness_ratio"] - 1.0) < witness_tol
        out.append(rec)
    return out


def check_sobolev_sup(n: int = 2, a: int = 0, s: float = 2.0, trials: int = 50, seed: int = 0,
                      tol: float = 1e-9) -> dict:
    rep = ops.verify_embedding_estimates(n, a, s, 0.0, trials, seed=seed, tol=tol, parts=(3,))
    r = rep["part3"]
    return _record("sobolev_part3", "sup|phi| <= |phi|_s (|S^n|^-1 sum N(n,m) (m + (n-1)/2)^(-2s))^(1/2)",
                   r["max_ratio"], 1 + tol, strict=False, constant=r["constant"], trials=trials,
                   n=n, a=a, s=s, grid_nodes=r["grid_nodes"])


def check_compactness(n: int, s: float, t: float, a_max: int = 6) -> dict:
    bounds = ops.compactness_bounds(n, s, t, a_max)
    increases = sum(b2 >= b1 for b1, b2 in zip(bounds, bounds[1:])) if s > t else 0
    return _record("compactness_bounds", "|I - T_a| from L2_s to L2_t decreases to 0 as a grows",
                   increases, 0, strict=False, bounds=bounds)


def check_quadrature(n: int, degree: int, tol: float = 1e-10) -> dict:
    quad = build_quadrature(n, degree)
    worst = abs(float(quad.weights.sum()) - sphere_moment([0] * (n + 1)))
    for d in range(degree + 1):
        for e in poly.monomial_exponents(n + 1, d):
            vals = np.prod(quad.nodes ** e[None, :], axis=1)
            worst = max(worst, abs(float(quad.weights @ vals) - sphere_moment(e)))
    return _record("quadrature_moments", "product rule integrates all monomials of degree <= D exactly",
                   worst, tol, degree=degree)


def check_basis_invariants(bases, tol: float = 1e-9) -> dict:
    failures = []
    for b in bases:
        try:
            b.check_invariants(tol=tol)
        except ValueError as exc:
            failures.append(f"n={b.n} m={b.m} {b.space}: {exc}")
    return _record("basis_invariants", "cached bases are harmonic/monogenic and orthonormal",
                   len(failures), 0, strict=False, failures=failures, count=len(bases))


def run_suite(n: int, m_max: int, seed: int, tol: float | None = None, bases=()) -> dict:
    """Every check at the given size; ``tol`` overrides all numerical bounds."""

    def t(default):
        return default if tol is None else tol

    a = m_max
    checks = [
        check_clifford_relations(n, seed=seed, tol=t(1e-12)),
        check_quadrature(n, 2 * m_max + 2, tol=t(1e-10)),
        check_dirac_squared([n + 1], count=100, seed=seed, tol=t(1e-10)),
        check_intertwining_pointwise([n], count=100, seed=seed, tol=t(1e-9)),
        check_dimensions([n], m_max),
        check_orthogonality(n, m_max, tol=t(1e-9)),
        check_spectrum(n, m_max, tol=t(1e-8)),
        check_intertwining_matrix(n, m_max, tol=t(1e-8)),
        check_addition_theorem(n, max(m_max, 1), seed=seed, tol=t(1e-8)),
        check_reproducing(n, a, seed=seed, tol=t(1e-8)),
        check_projection(n, a, seed=seed, tol=t(1e-8)),
        check_cauchy_theorem(n, seed=seed, tol=t(1e-8)),
        check_cauchy_integral_formula(n, seed=seed, tol=t(1e-6)),
        *check_sobolev(n, a, 1.0, 0.0, trials=100, seed=seed, tol=t(1e-9)),
        check_sobolev_sup(n, 0, n / 2 + 1, trials=50, seed=seed, tol=t(1e-9)),
        check_compactness(n, 1.0, 0.0),
    ]
    if bases:
        checks.insert(0, check_basis_invariants(bases))
    return {
        "tool": "dirac_sphere",
        "command": "verify",
        "config": {"n": n, "m_max": m_max, "seed": seed, "tol": tol},
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }
