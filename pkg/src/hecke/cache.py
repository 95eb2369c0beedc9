"""On-disk enumeration cache.

One append-only file of records per cache directory.  A record is an ASCII
length line followed by that many bytes of JSON ``{"key": [...], "value": ...}``
and a newline.  Writers take an advisory lock; corrupted records are skipped
with a warning and simply recomputed by the caller.
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path

from filelock import FileLock

log = logging.getLogger(__name__)

RECORDS = "records.ljson"


def _encode_key(key) -> str:
    return json.dumps(key, sort_keys=True, separators=(",", ":"), default=list)


class DiskCache:
    def __init__(self, directory: Path):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.path = self.dir / RECORDS
        self.lock = FileLock(str(self.dir / ".lock"))
        self._index: dict[str, object] | None = None
        self.corrupted = 0

    def _load(self) -> dict:
        if self._index is not None:
            return self._index
        index: dict = {}
        if self.path.exists():
            with self.lock, open(self.path, "rb") as fh:
                data = fh.read()
            for key, value in self._parse(data):
                index[key] = value
        self._index = index
        return index

    def _parse(self, data: bytes):
        pos = 0
        n = len(data)
        while pos < n:
            nl = data.find(b"\n", pos)
            if nl < 0:
                self._warn(pos, "truncated length line")
                return
            head = data[pos:nl]
            try:
                size = int(head)
            except ValueError:
                self._warn(pos, "bad length line")
                pos = nl + 1
                continue
            body = data[nl + 1 : nl + 1 + size]
            pos = nl + 1 + size + 1
            try:
                rec = json.loads(body)
                yield _encode_key(rec["key"]), rec["value"]
            except (ValueError, KeyError, TypeError):
                self._warn(nl + 1, "unreadable record")

    def _warn(self, offset: int, what: str) -> None:
        self.corrupted += 1
        log.warning("cache %s: %s at byte %d ignored", self.path, what, offset)

    def get(self, key):
        return self._load().get(_encode_key(key))

    def put(self, key, value) -> None:
        index = self._load()
        k = _encode_key(key)
        if k in index:
            return
        index[k] = value
        body = json.dumps({"key": json.loads(k), "value": value}, sort_keys=True).encode()
        with self.lock, open(self.path, "ab") as fh:
            fh.write(b"%d\n" % len(body) + body + b"\n")
            fh.flush()
            os.fsync(fh.fileno())

    def keys(self) -> list[str]:
        return sorted(self._load())

    def inspect(self) -> list[dict]:
        out = []
        for k, v in sorted(self._load().items()):
            out.append({"key": json.loads(k), "size": len(json.dumps(v))})
        return out

    def clear(self) -> None:
        with self.lock:
            if self.path.exists():
                tmp = self.path.with_suffix(".del")
                os.replace(self.path, tmp)
                tmp.unlink()
        self._index = {}
