"""File-backed result store for prime sweeps, with crash-safe resume.

One JSON file maps primes to their serialized report lists plus metadata
(artifact version, series precision, timestamp).  A prime's entry is
rewritten only when re-run with higher precision or a newer version, so
re-running a finished sweep performs no computation.  Writes go through a
temp file and an atomic rename.
"""

from __future__ import annotations

import json
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path

from .checks import CheckReport

STORE_ENV = "SUPERCONG_STORE"
DEFAULT_STORE = "supercong_store.json"


def store_path(override: str | None = None) -> Path:
    if override:
        return Path(override)
    return Path(os.environ.get(STORE_ENV, DEFAULT_STORE))


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class SweepStore:
    def __init__(self, path: Path, version: str):
        self.path = Path(path)
        self.version = version
        self.data = {"version": version, "created": _now(), "primes": {}}

    @classmethod
    def load(cls, path: Path, version: str) -> "SweepStore":
        store = cls(path, version)
        if store.path.exists():
            with open(store.path, "r", encoding="utf-8") as fh:
                store.data = json.load(fh)
        return store

    def has_current(self, p: int, precision: int) -> bool:
        entry = self.data["primes"].get(str(p))
        return (
            entry is not None
            and entry.get("version") == self.version
            and entry.get("precision", 0) >= precision
        )

    def put(self, p: int, reports: list[CheckReport], precision: int) -> None:
        self.data["primes"][str(p)] = {
            "version": self.version,
            "precision": precision,
            "timestamp": _now(),
            "reports": [r.to_json() for r in reports],
        }

    def reports_for(self, p: int) -> list[CheckReport]:
        entry = self.data["primes"][str(p)]
        return [CheckReport.from_json(r) for r in entry["reports"]]

    def save(self) -> None:
        self.data["updated"] = _now()
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(
            dir=self.path.parent or ".", prefix=self.path.name, suffix=".tmp"
        )
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(self.data, fh, indent=1, sort_keys=True)
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def logical_content(self) -> dict:
        """Store content with timestamps stripped, for reproducibility checks."""

        def strip(obj):
            if isinstance(obj, dict):
                return {
                    k: strip(v)
                    for k, v in sorted(obj.items())
                    if k not in ("timestamp", "created", "updated")
                }
            if isinstance(obj, list):
                return [strip(v) for v in obj]
            return obj

        return strip(self.data)
