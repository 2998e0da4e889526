import json
import math

import pytest

from dirac_sphere.cli import RunConfig, UsageError, build_parser


def load(result):
    assert result.stdout, result.stderr
    return json.loads(result.stdout)


def test_basis_dimension_table(run_cli):
    r = run_cli("basis", "--n", 2, "--m-max", 2)
    assert r.returncode == 0, r.stderr
    rows = load(r)["dimensions"]
    assert [row["H_scalar"] for row in rows] == [1, 3, 5]
    assert [row["P_real"] for row in rows] == [8, 16, 24]


def test_basis_warm_cache(run_cli, tmp_path):
    first = run_cli("basis", "--n", 2, "--m-max", 2, "-v")
    second = run_cli("basis", "--n", 2, "--m-max", 2, "-v")
    assert first.stdout == second.stdout
    assert "cache miss" in first.stderr and "cache hit" not in first.stderr
    assert "cache hit" in second.stderr and "cache miss" not in second.stderr


def test_basis_csv(run_cli):
    r = run_cli("basis", "--n", 3, "--m-max", 1, "--format", "csv")
    lines = r.stdout.strip().splitlines()
    assert lines[0].startswith("n,m,H_scalar")
    assert lines[2].split(",")[2] == "4"


def test_n_zero_is_usage_error(run_cli):
    r = run_cli("basis", "--n", 0, "--m-max", 1)
    assert r.returncode == 2
    assert "--n must be >= 1" in r.stderr


def test_unwritable_cache(run_cli, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    r = run_cli("basis", "--n", 2, "--m-max", 0, cache_dir=blocker / "sub")
    assert r.returncode == 3


@pytest.mark.parametrize("n,m_max,values", [(2, 3, [1, 2, 3, 4]), (3, 1, [1.5, 2.5])])
def test_spectrum_examples(run_cli, n, m_max, values):
    r = run_cli("spectrum", "--n", n, "--m-max", m_max)
    assert r.returncode == 0, r.stderr
    rep = load(r)
    assert [d["expected"] for d in rep["degrees"]] == [[-v, v] for v in values]
    assert rep["passed"] and rep["max_abs_error"] < 1e-8


def test_spectrum_tiny_tolerance_fails_cleanly(run_cli):
    r = run_cli("spectrum", "--n", 3, "--m-max", 1, "--tol", "1e-15")
    assert r.returncode == 1
    rep = load(r)
    assert rep["passed"] is False
    assert rep["max_abs_error"] > 1e-15


def test_spectrum_weak_quadrature(run_cli):
    r = run_cli("spectrum", "--n", 2, "--m-max", 3, "--quad-degree", 6)
    assert r.returncode == 2
    assert "need at least 8" in r.stderr


@pytest.mark.parametrize("seed", [42, 43])
def test_verify_passes_for_any_seed(run_cli, seed):
    r = run_cli("verify", "--n", 2, "--m-max", 3, "--seed", seed)
    assert r.returncode == 0, r.stderr
    rep = load(r)
    assert rep["passed"]
    names = {c["name"] for c in rep["checks"]}
    assert {"spectrum", "addition_theorem", "sobolev_part3", "cauchy_integral_formula"} <= names
    for c in rep["checks"]:
        assert set(c) >= {"name", "claim", "measured", "bound", "passed"}
    add = next(c for c in rep["checks"] if c["name"] == "addition_theorem")
    assert add["calibrated_sign"] == add["argument_sign"]


def test_verify_writes_report_on_failure(run_cli, tmp_path):
    out = tmp_path / "report.json"
    r = run_cli("verify", "--n", 2, "--m-max", 1, "--tol", "1e-30", "--output", out)
    assert r.returncode == 1
    rep = json.loads(out.read_text())
    assert not rep["passed"]


def test_verify_corrupted_cache(run_cli, tmp_path):
    cache = tmp_path / "cache"
    assert run_cli("basis", "--n", 2, "--m-max", 1).returncode == 0
    target = cache / "n2_m1_P.json"
    target.write_text(target.read_text().replace("0.", "9.", 1))
    r = run_cli("verify", "--n", 2, "--m-max", 1)
    assert r.returncode == 3
    assert str(target) in r.stderr


def write_coeffs(path, entries, n=2):
    path.write_text(json.dumps({"n": n, "basis": "H", "entries": entries}))
    return path


def test_sobolev_single_entry(run_cli, tmp_path):
    f = write_coeffs(tmp_path / "c.json", [{"m": 1, "k": 1, "value": 1}])
    rep = load(run_cli("sobolev", "--n", 2, "--s", 1, "--a", 0, "--input", f))
    assert rep["norm_s"] == pytest.approx(1.5)
    assert rep["bound_ratios"]["part2"] == pytest.approx(1.0)


def test_sobolev_order_zero_is_l2(run_cli, tmp_path):
    f = write_coeffs(tmp_path / "c.json", [{"m": 0, "k": 1, "value": 3}, {"m": 2, "k": 4, "value": [4] + [0] * 7}])
    rep = load(run_cli("sobolev", "--n", 2, "--s", 0, "--input", f))
    assert rep["norm_s"] == pytest.approx(5.0)


def test_sobolev_full_projection(run_cli, tmp_path):
    f = write_coeffs(tmp_path / "c.json", [{"m": 2, "k": 1, "value": 1}, {"m": 3, "k": 7, "value": 2}])
    rep = load(run_cli("sobolev", "--n", 2, "--s", 1, "--a", 3, "--input", f))
    assert rep["residual_norm_s"] == 0.0
    assert rep["projection_norm_s"] == pytest.approx(rep["norm_s"])


def test_sobolev_unknown_index(run_cli, tmp_path):
    f = write_coeffs(tmp_path / "c.json", [{"m": 1, "k": 4, "value": 1}])
    r = run_cli("sobolev", "--n", 2, "--input", f)
    assert r.returncode == 2
    assert "(m=1, k=4)" in r.stderr


def test_sobolev_missing_file(run_cli, tmp_path):
    r = run_cli("sobolev", "--n", 2, "--input", tmp_path / "missing.json")
    assert r.returncode == 3


@pytest.mark.parametrize("command", ["project", "kernel"])
def test_kernel_commands(run_cli, command):
    r = run_cli(command, "--n", 2, "--a", 3, "--m-max", 5)
    assert r.returncode == 0, r.stderr
    assert load(r)["passed"]


def test_cauchy_command(run_cli):
    r = run_cli("cauchy", "--n", 2, "--quad-degree", 40)
    assert r.returncode == 0, r.stderr
    checks = load(r)["checks"]
    assert [c["name"] for c in checks] == ["cauchy_theorem", "cauchy_integral_formula"]
    assert checks[1]["calibrated_constant"] == pytest.approx(1 / (4 * math.pi))


def test_config_validation():
    args = build_parser().parse_args(["spectrum", "--n", "2", "--m-max", "2", "--quad-degree", "4"])
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k != "verbose"})
    with pytest.raises(UsageError, match="at least 6"):
        cfg.validate()
    with pytest.raises(UsageError):
        RunConfig("verify", n=1).validate()
