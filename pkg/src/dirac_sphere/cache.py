"""On-disk cache of orthonormal bases, one JSON document per (n, m, space)."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

from .monogenics import BasisSet, orthonormal_basis
from .polynomials import MVPolynomial

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
ENV_VAR = "DIRAC_SPHERE_CACHE"


class CacheIntegrityError(Exception):
    def __init__(self, path, reason: str):
        super().__init__(f"cache file {path} failed integrity check: {reason}")
        self.path = Path(path)


def _canonical(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def checksum(payload: dict) -> str:
    body = {k: v for k, v in payload.items() if k != "checksum"}
    return hashlib.sha256(_canonical(body).encode()).hexdigest()


def basis_to_payload(basis: BasisSet) -> dict:
    payload = {
        "format": FORMAT_VERSION,
        "n": basis.n,
        "m": basis.m,
        "space": basis.space,
        "orthonormal": basis.orthonormal,
        "quad_degree": basis.quadrature_degree,
        "elements": [{"terms": p.to_records()} for p in basis.elements],
    }
    payload["checksum"] = checksum(payload)
    return payload


def payload_to_basis(payload: dict) -> BasisSet:
    dim = payload["n"] + 1
    elements = tuple(MVPolynomial.from_records(dim, e["terms"]) for e in payload["elements"])
    return BasisSet(
        payload["n"], payload["m"], payload["space"], elements, payload["orthonormal"], payload["quad_degree"]
    )


def default_cache_dir(flag_value=None) -> Path:
    """The environment variable wins over the flag, the flag over the default."""
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    if flag_value:
        return Path(flag_value)
    return Path.home() / ".cache" / "dirac_sphere"


class BasisCache:
    def __init__(self, root):
        self.root = Path(root)

    def path(self, n: int, m: int, space: str) -> Path:
        return self.root / f"n{n}_m{m}_{space}.json"

    def save(self, basis: BasisSet) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.path(basis.n, basis.m, basis.space)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(_canonical(basis_to_payload(basis)))
        tmp.replace(path)
        return path

    def load(self, n: int, m: int, space: str) -> BasisSet:
        path = self.path(n, m, space)
        try:
            payload = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise CacheIntegrityError(path, f"invalid JSON ({exc.msg})") from exc
        if not isinstance(payload, dict) or payload.get("format") != FORMAT_VERSION:
            raise CacheIntegrityError(path, "unknown format version")
        if payload.get("checksum") != checksum(payload):
            raise CacheIntegrityError(path, "checksum mismatch")
        if (payload.get("n"), payload.get("m"), payload.get("space")) != (n, m, space):
            raise CacheIntegrityError(path, "header does not match file name")
        try:
            return payload_to_basis(payload)
        except (KeyError, TypeError, ValueError) as exc:
            raise CacheIntegrityError(path, f"malformed content ({exc})") from exc

    def get(self, n: int, m: int, space: str) -> tuple[BasisSet, bool]:
        """Load a basis, building and storing it on a miss. Returns ``(basis, hit)``."""
        path = self.path(n, m, space)
        if path.exists():
            log.info("cache hit: %s", path)
            return self.load(n, m, space), True
        log.info("cache miss: building %s", path)
        basis = orthonormal_basis(n, m, space)
        self.save(basis)
        return basis, False
