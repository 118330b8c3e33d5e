"""Append-only on-disk JSON cache with atomic writes."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path


def canonical_key(payload: dict) -> str:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:32]


class Cache:
    def __init__(self, directory: str | os.PathLike):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)

    def _path(self, key: dict) -> Path:
        return self.dir / f"{key.get('kind', 'entry')}-{canonical_key(key)}.json"

    def get(self, key: dict):
        path = self._path(key)
        if not path.exists():
            return None
        with path.open() as fh:
            data = json.load(fh)
        return data["value"] if data.get("key") == key else None

    def put(self, key: dict, value) -> None:
        path = self._path(key)
        if path.exists():
            return
        fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump({"key": key, "value": value}, fh, sort_keys=True)
        os.replace(tmp, path)
