"""Acceptance criteria, one test each; every test records a PASS/FAIL line
that is echoed in the terminal summary."""

import os
import subprocess
import sys

import pytest

from conftest import ACCEPTANCE_LINES
from dirac_sphere import operators as ops
from dirac_sphere import verification as ver
from dirac_sphere.specfun import ADDITION_ARGUMENT_SIGN


def record(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} [{number:2d}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_01_spectral_resolution():
    worst = 0.0
    balanced = True
    for n, m_max in [(2, 4), (3, 3)]:
        rep = ops.spectrum_report(n, m_max)
        for d in rep.per_degree:
            assert d["expected"] == [-(d["m"] + n / 2), d["m"] + n / 2]
        worst = max(worst, rep.max_abs_error)
        balanced = balanced and all(d["balanced"] for d in rep.per_degree)
    record(1, "spectrum +-(m + n/2), n=2 m<=4, n=3 m<=3", worst < 1e-8 and balanced,
           f"max |error| = {worst:.3e} (< 1e-8), multiplicities balanced = {balanced}")


def test_02_anticommutation_identity():
    c = ver.check_intertwining_pointwise([2, 3], count=100, seed=0, tol=1e-9)
    record(2, "Gamma w + w Gamma = n w pointwise", c["passed"],
           f"max residual = {c['measured']:.3e} over 100 pairs (< 1e-9)")


def test_03_dirac_squared():
    c = ver.check_dirac_squared([3, 4], count=100, max_degree=5, seed=0, tol=1e-10)
    record(3, "D^2 = -Laplacian", c["passed"], f"max residual = {c['measured']:.3e} over 100 polynomials (< 1e-10)")


def test_04_dimension_oracles():
    c = ver.check_dimensions([2, 3], 4)
    for row in c["table"]:
        assert row["H_scalar"] == row["H_scalar_expected"]
        assert row["P_real"] == row["P_real_expected"]
    record(4, "nullspace dimensions, n in {2,3}, m <= 4", c["passed"], f"{int(c['measured'])} mismatches")


def test_05_addition_theorem():
    c = ver.check_addition_theorem(2, 5, pairs=50, seed=0, tol=1e-8)
    assert c["calibrated_sign"] == ADDITION_ARGUMENT_SIGN
    record(5, "addition theorem, n=2, m <= 5", c["passed"],
           f"max |sum - kernel| = {c['measured']:.3e} (< 1e-8), argument sign = {c['calibrated_sign']:+d} "
           f"(other sign residual {c['residual_minus' if c['calibrated_sign'] == 1 else 'residual_plus']:.3e})")


def test_06_reproducing_property():
    c = ver.check_reproducing(2, 3, functions=20, points=20, seed=0, tol=1e-8)
    record(6, "reproducing kernel, n=2, a=3", c["passed"], f"max |(f, G_a(w,.)) - f(w)| = {c['measured']:.3e} (< 1e-8)")


def test_07_cauchy_theorem_and_integral_formula():
    ct = [ver.check_cauchy_theorem(n, max_degree=2, seed=0, tol=1e-8) for n in (2, 3)]
    cif = ver.check_cauchy_integral_formula(2, max_degree=2, max_radius=0.5, quad_degree=40, seed=0, tol=1e-6)
    ok = all(c["passed"] for c in ct) and cif["passed"]
    record(7, "Cauchy theorem and integral formula", ok,
           f"CT residual = {max(c['measured'] for c in ct):.3e} (< 1e-8); CIF error = {cif['measured']:.3e} "
           f"(< 1e-6) with calibrated constant {cif['calibrated_constant']:.12f}")


def test_08_sobolev_estimates():
    p1, p2 = ver.check_sobolev(2, 2, 1.0, 0.0, trials=100, seed=0, tol=1e-9, witness_tol=1e-10)
    p3 = ver.check_sobolev_sup(2, 0, 2.0, trials=50, seed=0, tol=1e-9)
    assert abs(p1["witness_ratio"] - 1) < 1e-10 and abs(p2["witness_ratio"] - 1) < 1e-10
    ok = p1["passed"] and p2["passed"] and p3["passed"]
    record(8, "Sobolev estimates parts 1-3", ok,
           f"max ratios {p1['measured']:.15f}, {p2['measured']:.15f}, {p3['measured']:.4f} (<= 1 + 1e-9); "
           f"witnesses {p1['witness_ratio']:.15f}, {p2['witness_ratio']:.15f}")


def test_09_projection_consistency():
    c = ver.check_projection(2, 3, functions=20, seed=0, tol=1e-8, idempotence_tol=1e-12)
    record(9, "T_a kernel form vs truncation, n=2, a=3", c["passed"],
           f"max difference = {c['measured']:.3e} (< 1e-8), idempotence defect = {c['idempotence']:.3e} (< 1e-12)")


def test_10_determinism(tmp_path):
    env = dict(os.environ)
    env.pop("DIRAC_SPHERE_CACHE", None)
    outputs = []
    for run in range(2):
        out = tmp_path / f"verify{run}.json"
        cmd = [sys.executable, "-m", "dirac_sphere", "verify", "--n", "2", "--m-max", "3", "--threads", "1",
               "--cache-dir", str(tmp_path / "cache"), "--output", str(out)]
        res = subprocess.run(cmd, capture_output=True, text=True, env=env, timeout=600)
        assert res.returncode == 0, res.stderr
        outputs.append(out.read_bytes())
    same = outputs[0] == outputs[1]
    record(10, "verify --threads 1 is byte-identical", same, f"{len(outputs[0])} bytes, identical = {same}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
