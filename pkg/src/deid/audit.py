"""Append-only audit records shared by the metadata and pixel paths."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable


def content_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()[:16]


@dataclass(frozen=True)
class AuditRecord:
    file_id: str
    stage: str                 # "metadata" | "pixel"
    target: str                # tag path or box text
    action: str
    before_hash: str
    after_hash: str
    actor: str = "AUTO"        # "AUTO" or "HUMAN:<id>"
    timestamp: float = field(default_factory=time.time)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "AuditRecord":
        return cls(**json.loads(line))


def write_audit_log(path: Path | str, records: Iterable[AuditRecord]) -> None:
    with open(path, "a") as fh:
        for record in records:
            fh.write(record.to_json() + "\n")


def read_audit_log(path: Path | str) -> list[AuditRecord]:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(AuditRecord.from_json(line))
    return out
