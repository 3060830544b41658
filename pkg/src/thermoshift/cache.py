"""JSON disk cache for digit streams and pressure values, guarded by file locks."""
from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Any

from filelock import FileLock

CACHE_SCHEMA = 1


def default_dir() -> Path:
    env = os.environ.get("THERMOSHIFT_CACHE")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "thermoshift"


class DiskCache:
    def __init__(self, root: str | Path | None = None, enabled: bool = True):
        self.root = Path(root) if root is not None else default_dir()
        self.enabled = enabled

    def _path(self, kind: str, parts: dict) -> Path:
        blob = json.dumps({"schema": CACHE_SCHEMA, "kind": kind, **parts}, sort_keys=True)
        digest = hashlib.sha256(blob.encode()).hexdigest()[:32]
        return self.root / kind / f"{digest}.json"

    def get(self, kind: str, parts: dict) -> Any | None:
        if not self.enabled:
            return None
        path = self._path(kind, parts)
        if not path.exists():
            return None
        with FileLock(str(path) + ".lock"):
            try:
                return json.loads(path.read_text())["value"]
            except (OSError, ValueError, KeyError):
                return None

    def put(self, kind: str, parts: dict, value: Any) -> None:
        if not self.enabled:
            return
        path = self._path(kind, parts)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with FileLock(str(path) + ".lock"):
                tmp = path.with_suffix(".tmp")
                tmp.write_text(json.dumps({"key": parts, "value": value}, sort_keys=True))
                tmp.replace(path)
        except OSError:
            pass

    def fetch(self, kind: str, parts: dict, compute):
        hit = self.get(kind, parts)
        if hit is not None:
            return hit
        value = compute()
        self.put(kind, parts, value)
        return value
