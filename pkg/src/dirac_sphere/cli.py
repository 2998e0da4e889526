"""Command-line driver: ``dirac-sphere <command> [options]``.

Exit codes: 0 pass, 1 verification failure, 2 usage or configuration
error, 3 I/O error (including cache integrity failures).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from contextlib import nullcontext
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import operators as ops
from . import verification as ver
from .cache import BasisCache, CacheIntegrityError, default_cache_dir
from .clifford import Multivector
from .monogenics import SPACES
from .specfun import ADDITION_ARGUMENT_SIGN, harmonic_dimension
from .sphere import QuadratureError, SpectralCoeffs, build_quadrature

log = logging.getLogger("dirac_sphere")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n: int
    m_max: int = 3
    a: int = 3
    d: int = 1
    s: float = 1.0
    t: float = 0.0
    quad_degree: int | None = None
    tol: float | None = None
    seed: int = 0
    cache_dir: str | None = None
    output: str | None = None
    output_format: str = "json"
    threads: int | None = None
    input: str | None = None

    def validate(self) -> None:
        if self.n < 1:
            raise UsageError(f"--n must be >= 1, got {self.n}")
        for name in ("m_max", "a"):
            if getattr(self, name) < 0:
                raise UsageError(f"--{name.replace('_', '-')} must be >= 0")
        if self.d < 1:
            raise UsageError("--d must be >= 1")
        if self.s < 0 or self.t < 0:
            raise UsageError("Sobolev orders must be nonnegative")
        if self.threads is not None and self.threads < 1:
            raise UsageError("--threads must be >= 1")
        if self.command in ("verify", "kernel", "project") and self.n < 2:
            raise UsageError(f"{self.command} needs --n >= 2 (Gegenbauer index (n-1)/2 must be positive)")
        if self.command == "spectrum" and self.quad_degree is not None:
            need = 2 * self.m_max + 2
            if self.quad_degree < need:
                raise UsageError(
                    f"quadrature degree {self.quad_degree} too low for m_max={self.m_max}; "
                    f"need at least {need}"
                )

    def public(self) -> dict:
        """Config fields that affect results (excludes output plumbing)."""
        out = asdict(self)
        for key in ("cache_dir", "output", "output_format", "threads", "input"):
            out.pop(key)
        return out


def _tol(config: RunConfig, default: float) -> float:
    return default if config.tol is None else config.tol


# subcommands; each returns (report, table rows, passed)


def cmd_basis(config: RunConfig, cache: BasisCache):
    summary = []
    for m in range(config.m_max + 1):
        for space in SPACES:
            basis, hit = cache.get(config.n, m, space)
            basis.check_invariants()
            summary.append({"m": m, "space": space, "size": len(basis), "file": cache.path(config.n, m, space).name})
    rows = ver.dimension_table(config.n, config.m_max)
    mismatches = [
        r for r in rows
        if r["H_scalar"] != r["H_scalar_expected"] or r["P_real"] != r["P_real_expected"]
        or r["H_real"] != r["P_plus_Q_prev_real"]
    ]
    for r in mismatches:
        log.error("dimension mismatch at m=%d: computed H %d vs %d, P %d vs %d", r["m"], r["H_scalar"],
                  r["H_scalar_expected"], r["P_real"], r["P_real_expected"])
    report = {"dimensions": rows, "bases": summary, "passed": not mismatches}
    return report, rows, not mismatches


def cmd_spectrum(config: RunConfig, cache: BasisCache):
    tol = _tol(config, 1e-8)
    report = ops.spectrum_report(config.n, config.m_max, config.quad_degree)
    out = report.to_dict(tol)
    out["quad_degree"] = config.quad_degree or 2 * config.m_max + 2
    rows = [{k: v for k, v in d.items() if k != "expected"} | {"eigenvalue": d["expected"][1]} for d in report.per_degree]
    return out, rows, report.passed(tol)


def cmd_verify(config: RunConfig, cache: BasisCache):
    bases = []
    for m in range(config.m_max + 1):
        for space in SPACES:
            bases.append(cache.get(config.n, m, space)[0])
    report = ver.run_suite(config.n, config.m_max, config.seed, config.tol, bases=bases)
    rows = [{k: c[k] for k in ("name", "measured", "bound", "passed")} for c in report["checks"]]
    return report, rows, report["passed"]


def read_coefficients(path: str, n: int) -> SpectralCoeffs:
    """Parse ``{"n", "basis": "H", "entries": [{"m", "k", "value"}]}``; k is 1-based."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg})") from exc
    if doc.get("basis", "H") != "H":
        raise UsageError(f"{path}: only basis 'H' is supported, got {doc.get('basis')!r}")
    if doc.get("n", n) != n:
        raise UsageError(f"{path}: file is for n={doc.get('n')}, command uses n={n}")
    size = 1 << (n + 1)
    entries = {}
    for e in doc.get("entries", []):
        try:
            m, k, value = int(e["m"]), int(e["k"]), e["value"]
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{path}: malformed entry {e!r}") from exc
        if m < 0 or not 1 <= k <= harmonic_dimension(n, m):
            raise UsageError(f"{path}: unknown basis index (m={m}, k={k}) for n={n}")
        if isinstance(value, (int, float)):
            mv = Multivector.scalar(n + 1, float(value))
        else:
            if len(value) != size:
                raise UsageError(f"{path}: value for (m={m}, k={k}) needs {size} blade coefficients")
            mv = Multivector(n + 1, np.asarray(value, dtype=float))
        entries[(m, k)] = entries[(m, k)] + mv if (m, k) in entries else mv
    return SpectralCoeffs(n, "H", entries)


def cmd_sobolev(config: RunConfig, cache: BasisCache):
    if not config.input:
        raise UsageError("sobolev needs --input COEFFS.json")
    n, a, s, t = config.n, config.a, config.s, config.t
    coeffs = read_coefficients(config.input, n)
    spec_s, spec_t, spec_0 = ops.SobolevSpec(s, n), ops.SobolevSpec(t, n), ops.SobolevSpec(0.0, n)
    head = ops.project_Ta(coeffs, a)
    tail = coeffs - head
    report = {
        "n": n, "a": a, "s": s, "t": t,
        "norm_s": ops.sobolev_norm(coeffs, spec_s),
        "norm_0": ops.sobolev_norm(coeffs, spec_0),
        "projection_norm_s": ops.sobolev_norm(head, spec_s),
        "residual_norm_s": ops.sobolev_norm(tail, spec_s),
    }
    ratios = {}
    if a + (n - 1) / 2 > 0 and ops.sobolev_norm(head, spec_0) > 0:
        ratios["part1"] = ops.sobolev_norm(head, spec_s) / (
            (a + (n - 1) / 2) ** s * ops.sobolev_norm(head, spec_0))
    if s >= t and ops.sobolev_norm(tail, spec_s) > 0:
        ratios["part2"] = ops.sobolev_norm(tail, spec_t) / (
            (a + 1 + (n - 1) / 2) ** (t - s) * ops.sobolev_norm(tail, spec_s))
    report["bound_ratios"] = ratios
    tol = _tol(config, 1e-9)
    report["passed"] = all(r <= 1 + tol for r in ratios.values())
    rows = [{"quantity": k, "value": v} for k, v in report.items() if isinstance(v, float)]
    rows += [{"quantity": f"ratio_{k}", "value": v} for k, v in ratios.items()]
    return report, rows, report["passed"]


def cmd_project(config: RunConfig, cache: BasisCache):
    check = ver.check_projection(config.n, config.a, seed=config.seed, tol=_tol(config, 1e-8))
    return check, [{k: check[k] for k in ("name", "measured", "bound", "passed")}], check["passed"]


def cmd_kernel(config: RunConfig, cache: BasisCache):
    checks = [
        ver.check_addition_theorem(config.n, max(config.m_max, 1), seed=config.seed, tol=_tol(config, 1e-8)),
        ver.check_reproducing(config.n, config.a, seed=config.seed, tol=_tol(config, 1e-8)),
    ]
    report = {"argument_sign": ADDITION_ARGUMENT_SIGN, "checks": checks, "passed": all(c["passed"] for c in checks)}
    rows = [{k: c[k] for k in ("name", "measured", "bound", "passed")} for c in checks]
    return report, rows, report["passed"]


def cmd_cauchy(config: RunConfig, cache: BasisCache):
    degree = config.quad_degree or 40
    try:
        build_quadrature(config.n, degree).require(6)
    except QuadratureError as exc:
        raise UsageError(str(exc)) from exc
    checks = [
        ver.check_cauchy_theorem(config.n, seed=config.seed, tol=_tol(config, 1e-8)),
        ver.check_cauchy_integral_formula(config.n, quad_degree=degree, seed=config.seed, tol=_tol(config, 1e-6)),
    ]
    report = {"checks": checks, "passed": all(c["passed"] for c in checks)}
    rows = [{k: c[k] for k in ("name", "measured", "bound", "passed")} for c in checks]
    return report, rows, report["passed"]


COMMANDS = {
    "basis": (cmd_basis, "build and cache orthonormal H, P, Q bases; print dimension table"),
    "spectrum": (cmd_spectrum, "eigenvalues of the conformal Dirac operator per degree"),
    "verify": (cmd_verify, "run the full invariant suite"),
    "sobolev": (cmd_sobolev, "Sobolev norms and projections of a coefficient file"),
    "project": (cmd_project, "compare kernel and truncation forms of T_a"),
    "kernel": (cmd_kernel, "addition theorem and reproducing property"),
    "cauchy": (cmd_cauchy, "Cauchy theorem and integral formula on the unit ball"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True, help="sphere dimension (S^n in R^(n+1))")
    common.add_argument("--m-max", type=int, default=3, help="largest homogeneous degree")
    common.add_argument("--a", type=int, default=3, help="projection cutoff degree")
    common.add_argument("--d", type=int, default=1, help="spinorial Laplacian order")
    common.add_argument("--s", type=float, default=1.0, help="Sobolev order s")
    common.add_argument("--t", type=float, default=0.0, help="Sobolev order t <= s")
    common.add_argument("--quad-degree", type=int, default=None, help="quadrature exactness degree")
    common.add_argument("--tol", type=float, default=None, help="override every pass/fail bound")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cache-dir", default=None, help="basis cache directory (DIRAC_SPHERE_CACHE wins)")
    common.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", dest="output_format", choices=("json", "csv"), default="json")
    common.add_argument("--threads", type=int, default=None, help="cap BLAS/OpenMP threads")
    common.add_argument("--input", default=None, help="coefficient file for sobolev")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="dirac-sphere", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def _jsonable(obj):
    if isinstance(obj, (np.generic, np.ndarray)):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render(report: dict, rows: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, default=_jsonable) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def _thread_limit(threads):
    if threads is None:
        return nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=threads)


def run(config: RunConfig) -> int:
    config.validate()
    cache = BasisCache(default_cache_dir(config.cache_dir))
    func = COMMANDS[config.command][0]
    with _thread_limit(config.threads):
        report, rows, passed = func(config, cache)
    report = {"command": config.command, "config": config.public()} | report
    text = render(report, rows, config.output_format)
    if config.output:
        Path(config.output).write_text(text)
    else:
        sys.stdout.write(text)
    log.log(logging.INFO if passed else logging.WARNING, "%s: %s", config.command, "PASS" if passed else "FAIL")
    return EXIT_OK if passed else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    fields = {k: v for k, v in vars(args).items() if k != "verbose"}
    config = RunConfig(**fields)
    try:
        return run(config)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except CacheIntegrityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except QuadratureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
