import os
import subprocess
import sys

import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def run_cli(tmp_path, monkeypatch):
    """Run ``python -m dirac_sphere`` with a private cache directory."""
    env = dict(os.environ)
    env.pop("DIRAC_SPHERE_CACHE", None)

    def run(*args, cache_dir=None):
        cmd = [sys.executable, "-m", "dirac_sphere", *map(str, args)]
        cmd += ["--cache-dir", str(cache_dir or tmp_path / "cache")]
        return subprocess.run(cmd, capture_output=True, text=True, env=env, timeout=600)

    return run


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
