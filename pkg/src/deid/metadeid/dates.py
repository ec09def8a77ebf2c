"""Per-patient date shifting with persistent offsets.

One signed day offset per patient key, constant for the run, so intervals
between studies of the same patient are preserved. Offsets derive from a
salted hash of the key (uniform over [-365, -1]) unless a fixed offset is
configured, which keeps assignment independent of processing order.
"""

from __future__ import annotations

import hashlib
import json
import threading
from datetime import datetime, timedelta
from pathlib import Path

from ..dicomio import Tag

PATIENT_ID_TAG = Tag(0x0010, 0x0020)


class DateShiftPolicy:
    def __init__(
        self,
        salt: str = "deid-dates",
        key_element: Tag = PATIENT_ID_TAG,
        fixed_offset: int | None = None,
    ):
        self.salt = salt
        self.key_element = key_element
        self.fixed_offset = fixed_offset
        self._offsets: dict[str, int] = {}
        self._lock = threading.Lock()

    def offset_for(self, patient_key: str) -> int:
        """Atomic get-or-create of the per-patient offset."""
        with self._lock:
            if patient_key in self._offsets:
                return self._offsets[patient_key]
            if self.fixed_offset is not None:
                offset = int(self.fixed_offset)
            else:
                digest = hashlib.sha256(f"{self.salt}|{patient_key}".encode()).digest()
                offset = -1 - int.from_bytes(digest[:8], "big") % 365
            self._offsets[patient_key] = offset
            return offset

    def save(self, path: Path | str) -> None:
        with self._lock:
            doc = {
                "salt": self.salt,
                "key_element": [self.key_element.group, self.key_element.element],
                "fixed_offset": self.fixed_offset,
                "offsets": dict(self._offsets),
            }
        Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path: Path | str) -> "DateShiftPolicy":
        doc = json.loads(Path(path).read_text())
        policy = cls(
            salt=doc["salt"],
            key_element=Tag(*doc["key_element"]),
            fixed_offset=doc.get("fixed_offset"),
        )
        policy._offsets.update({k: int(v) for k, v in doc["offsets"].items()})
        return policy


def shift_da_value(value: str, days: int) -> str:
    """Shift a DICOM DA value (YYYYMMDD) by a signed day count."""
    stamp = datetime.strptime(value.strip(), "%Y%m%d")
    return (stamp + timedelta(days=days)).strftime("%Y%m%d")


def shift_dt_value(value: str, days: int) -> str:
    """Shift the date part of a DT value, preserving any time suffix."""
    head, tail = value[:8], value[8:]
    return shift_da_value(head, days) + tail
