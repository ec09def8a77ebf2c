"""Deterministic, injective UID remapping.

Generated UIDs are a salted SHA-256 of the original rendered as a decimal
arc under the configured root, so the same original maps to the same
replacement regardless of processing order or parallelism. A reverse map
guards injectivity; on the (astronomically unlikely) digest collision the
digest window widens until the clash clears.
"""

from __future__ import annotations

import hashlib
import json
import threading
from pathlib import Path

DEFAULT_UID_ROOT = "2.25."
_MAX_UID_LEN = 64


class UidMap:
    def __init__(self, root: str = DEFAULT_UID_ROOT, salt: str = "deid-uids"):
        if not root.endswith("."):
            root += "."
        self.root = root
        self.salt = salt
        self._forward: dict[str, str] = {}
        self._reverse: dict[str, str] = {}
        self._lock = threading.Lock()

    def _candidate(self, uid: str, width: int) -> str:
        digest = hashlib.sha256(f"{self.salt}|{uid}".encode()).digest()
        number = int.from_bytes(digest[:width], "big")
        generated = f"{self.root}{number}"
        return generated[:_MAX_UID_LEN]

    def remap(self, uid: str) -> str:
        uid = uid.strip()
        with self._lock:
            existing = self._forward.get(uid)
            if existing is not None:
                return existing
            width = 16
            candidate = self._candidate(uid, width)
            while candidate in self._reverse and self._reverse[candidate] != uid:
                width += 2
                candidate = self._candidate(uid, width)
            self._forward[uid] = candidate
            self._reverse[candidate] = uid
            return candidate

    def __len__(self) -> int:
        return len(self._forward)

    def items(self):
        with self._lock:
            return list(self._forward.items())

    def save(self, path: Path | str) -> None:
        with self._lock:
            doc = {"root": self.root, "salt": self.salt, "entries": dict(self._forward)}
        Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path: Path | str) -> "UidMap":
        doc = json.loads(Path(path).read_text())
        mapping = cls(root=doc["root"], salt=doc["salt"])
        for original, generated in doc["entries"].items():
            mapping._forward[original] = generated
            mapping._reverse[generated] = original
        return mapping
