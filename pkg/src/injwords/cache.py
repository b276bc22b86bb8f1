"""On-disk cache of invariant factors, one JSON file per boundary matrix."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Optional

from .complex import BASIS_ORDER_VERSION
from .linalg import SparseIntMatrix, smith_normal_form

log = logging.getLogger(__name__)


class CacheIntegrityError(ValueError):
    pass


def matrix_key(m: SparseIntMatrix) -> str:
    payload = json.dumps(
        {"v": BASIS_ORDER_VERSION, "shape": list(m.shape), "triplets": m.triplets()},
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _checksum(diag) -> str:
    return hashlib.sha256(json.dumps(list(diag)).encode()).hexdigest()


class SnfCache:
    """Maps a boundary matrix to its invariant factors.

    The file name is the content hash of the matrix, so a stale entry can
    never be served for a different matrix; ``n``, ``labels`` and ``degree``
    are stored alongside for inspection. Corrupt entries are recomputed.
    """

    def __init__(self, directory, n: Optional[int] = None, labels: Optional[int] = None):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.n = n
        self.labels = labels
        self.hits = 0
        self.misses = 0
        self.repaired = 0

    def path(self, key: str) -> Path:
        return self.dir / f"snf-{key}.json"

    def load(self, key: str) -> Optional[tuple[int, ...]]:
        p = self.path(key)
        if not p.exists():
            return None
        try:
            doc = json.loads(p.read_text())
            diag = tuple(int(d) for d in doc["diag"])
        except (ValueError, KeyError, TypeError) as exc:
            raise CacheIntegrityError(f"{p.name}: unreadable ({exc})") from None
        if doc.get("key") != key or doc.get("basis_order_version") != BASIS_ORDER_VERSION:
            raise CacheIntegrityError(f"{p.name}: key or version mismatch")
        if doc.get("checksum") != _checksum(diag):
            raise CacheIntegrityError(f"{p.name}: checksum mismatch")
        return diag

    def store(self, key: str, diag, shape, degree=None):
        doc = {
            "key": key,
            "basis_order_version": BASIS_ORDER_VERSION,
            "n": self.n,
            "labels": self.labels,
            "degree": degree,
            "shape": list(shape),
            "diag": list(diag),
            "checksum": _checksum(diag),
        }
        fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(doc, fh)
            os.replace(tmp, self.path(key))
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise

    def __call__(self, m: SparseIntMatrix, degree: Optional[int] = None) -> tuple[int, ...]:
        key = matrix_key(m)
        try:
            diag = self.load(key)
        except CacheIntegrityError as exc:
            log.warning("cache integrity error, recomputing: %s", exc)
            self.repaired += 1
            diag = None
        if diag is not None:
            self.hits += 1
            return diag
        self.misses += 1
        diag = smith_normal_form(m).diag
        self.store(key, diag, m.shape, degree)
        return diag
