"""Embedded quarantine store: files, items, decisions and audit records.

A single SQLite file survives restarts; decisions are append-only and item
state transitions are enforced with an optimistic conditional update (the
HTTP 409 contract rides on that).
"""

from __future__ import annotations

import json
import sqlite3
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..audit import AuditRecord
from ..detector.boxes import BBox

DECISIONS = ("PENDING", "APPROVED", "REJECTED", "EDITED")

_SCHEMA = """
CREATE TABLE IF NOT EXISTS files (
    id TEXT PRIMARY KEY,
    source_path TEXT,
    output_path TEXT,
    status TEXT NOT NULL,
    payload BLOB,
    meta TEXT
);
CREATE TABLE IF NOT EXISTS items (
    id TEXT PRIMARY KEY,
    file_id TEXT NOT NULL REFERENCES files(id),
    frame_index INTEGER NOT NULL DEFAULT 0,
    box TEXT NOT NULL,
    nv REAL NOT NULL,
    ocr_text TEXT,
    spans TEXT,
    proposed TEXT NOT NULL,
    decision TEXT NOT NULL DEFAULT 'PENDING',
    decided_box TEXT,
    crop BLOB,
    created REAL NOT NULL
);
CREATE TABLE IF NOT EXISTS decisions (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    item_id TEXT NOT NULL,
    decision TEXT NOT NULL,
    box TEXT,
    actor TEXT NOT NULL,
    ts REAL NOT NULL
);
CREATE TABLE IF NOT EXISTS audit (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    file_id TEXT NOT NULL,
    record TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS config (
    key TEXT PRIMARY KEY,
    value TEXT NOT NULL
);
"""


@dataclass
class QuarantineItem:
    id: str
    file_id: str
    frame_index: int
    box: BBox
    nv: float
    ocr_text: str
    spans: list[dict]
    proposed: str               # REDACT | KEEP
    decision: str = "PENDING"
    decided_box: Optional[BBox] = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "file_id": self.file_id,
            "frame_index": self.frame_index,
            "box": [self.box.x, self.box.y, self.box.w, self.box.h],
            "nv": self.nv,
            "ocr_text": self.ocr_text,
            "ner_spans": self.spans,
            "proposed": self.proposed,
            "decision": self.decision,
            "decided_box": (
                [self.decided_box.x, self.decided_box.y,
                 self.decided_box.w, self.decided_box.h]
                if self.decided_box else None
            ),
        }


def _row_to_item(row) -> QuarantineItem:
    decided = json.loads(row["decided_box"]) if row["decided_box"] else None
    return QuarantineItem(
        id=row["id"],
        file_id=row["file_id"],
        frame_index=row["frame_index"],
        box=BBox(*json.loads(row["box"])),
        nv=row["nv"],
        ocr_text=row["ocr_text"] or "",
        spans=json.loads(row["spans"] or "[]"),
        proposed=row["proposed"],
        decision=row["decision"],
        decided_box=BBox(*decided) if decided else None,
    )


class QuarantineStore:
    def __init__(self, path: Path | str):
        self.path = str(path)
        Path(self.path).parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._db = sqlite3.connect(self.path, check_same_thread=False)
        self._db.row_factory = sqlite3.Row
        with self._lock, self._db:
            self._db.executescript(_SCHEMA)

    def close(self) -> None:
        self._db.close()

    # -- files ---------------------------------------------------------------

    def upsert_file(self, file_id: str, source_path: str, status: str,
                    payload: bytes | None = None, output_path: str | None = None,
                    meta: dict | None = None) -> None:
        with self._lock, self._db:
            self._db.execute(
                "INSERT INTO files (id, source_path, output_path, status, payload, meta)"
                " VALUES (?, ?, ?, ?, ?, ?)"
                " ON CONFLICT(id) DO UPDATE SET source_path=excluded.source_path,"
                " output_path=excluded.output_path, status=excluded.status,"
                " payload=excluded.payload, meta=excluded.meta",
                (file_id, source_path, output_path, status, payload,
                 json.dumps(meta or {})),
            )

    def set_file_status(self, file_id: str, status: str,
                        output_path: str | None = None) -> None:
        with self._lock, self._db:
            self._db.execute(
                "UPDATE files SET status=?, output_path=COALESCE(?, output_path),"
                " payload=CASE WHEN ?='released' THEN NULL ELSE payload END WHERE id=?",
                (status, output_path, status, file_id),
            )

    def file(self, file_id: str) -> Optional[dict]:
        with self._lock:
            row = self._db.execute("SELECT * FROM files WHERE id=?", (file_id,)).fetchone()
        if row is None:
            return None
        return {
            "id": row["id"], "source_path": row["source_path"],
            "output_path": row["output_path"], "status": row["status"],
            "payload": row["payload"], "meta": json.loads(row["meta"] or "{}"),
        }

    def files(self, status: str | None = None) -> list[dict]:
        query = "SELECT id, source_path, output_path, status, meta FROM files"
        args: tuple = ()
        if status is not None:
            query += " WHERE status=?"
            args = (status,)
        with self._lock:
            rows = self._db.execute(query + " ORDER BY id", args).fetchall()
        return [
            {"id": r["id"], "source_path": r["source_path"],
             "output_path": r["output_path"], "status": r["status"],
             "meta": json.loads(r["meta"] or "{}")}
            for r in rows
        ]

    # -- items -----------------------------------------------------------------

    def add_item(self, item: QuarantineItem, crop: bytes) -> None:
        with self._lock, self._db:
            self._db.execute(
                "INSERT INTO items (id, file_id, frame_index, box, nv, ocr_text,"
                " spans, proposed, decision, crop, created)"
                " VALUES (?, ?, ?, ?, ?, ?, ?, ?, 'PENDING', ?, ?)",
                (item.id, item.file_id, item.frame_index,
                 json.dumps([item.box.x, item.box.y, item.box.w, item.box.h]),
                 item.nv, item.ocr_text, json.dumps(item.spans), item.proposed,
                 crop, time.time()),
            )

    def item(self, item_id: str) -> Optional[QuarantineItem]:
        with self._lock:
            row = self._db.execute("SELECT * FROM items WHERE id=?", (item_id,)).fetchone()
        return _row_to_item(row) if row else None

    def item_crop(self, item_id: str) -> Optional[bytes]:
        with self._lock:
            row = self._db.execute("SELECT crop FROM items WHERE id=?", (item_id,)).fetchone()
        return row["crop"] if row else None

    def pending_items(self) -> list[QuarantineItem]:
        with self._lock:
            rows = self._db.execute(
                "SELECT * FROM items WHERE decision='PENDING' ORDER BY nv DESC, id"
            ).fetchall()
        return [_row_to_item(r) for r in rows]

    def file_items(self, file_id: str) -> list[QuarantineItem]:
        with self._lock:
            rows = self._db.execute(
                "SELECT * FROM items WHERE file_id=? ORDER BY nv DESC, id", (file_id,)
            ).fetchall()
        return [_row_to_item(r) for r in rows]

    def pending_count(self, file_id: str) -> int:
        with self._lock:
            row = self._db.execute(
                "SELECT COUNT(*) AS n FROM items WHERE file_id=? AND decision='PENDING'",
                (file_id,),
            ).fetchone()
        return int(row["n"])

    def decide(self, item_id: str, decision: str, actor: str,
               box: Optional[BBox] = None) -> bool:
        """PENDING -> decision, exactly once; False signals the conflict."""
        if decision not in ("APPROVED", "REJECTED", "EDITED"):
            raise ValueError(f"bad decision {decision!r}")
        if decision == "EDITED" and box is None:
            raise ValueError("EDITED requires a box")
        box_json = json.dumps([box.x, box.y, box.w, box.h]) if box else None
        with self._lock, self._db:
            cursor = self._db.execute(
                "UPDATE items SET decision=?, decided_box=? WHERE id=? AND decision='PENDING'",
                (decision, box_json, item_id),
            )
            if cursor.rowcount == 0:
                return False
            self._db.execute(
                "INSERT INTO decisions (item_id, decision, box, actor, ts)"
                " VALUES (?, ?, ?, ?, ?)",
                (item_id, decision, box_json, actor, time.time()),
            )
        return True

    # -- audit and config ---------------------------------------------------------

    def add_audits(self, records: list[AuditRecord]) -> None:
        with self._lock, self._db:
            self._db.executemany(
                "INSERT INTO audit (file_id, record) VALUES (?, ?)",
                [(r.file_id, r.to_json()) for r in records],
            )

    def audits(self, file_id: str | None = None) -> list[AuditRecord]:
        query = "SELECT record FROM audit"
        args: tuple = ()
        if file_id is not None:
            query += " WHERE file_id=?"
            args = (file_id,)
        with self._lock:
            rows = self._db.execute(query + " ORDER BY seq", args).fetchall()
        return [AuditRecord.from_json(r["record"]) for r in rows]

    def set_config(self, key: str, value) -> None:
        with self._lock, self._db:
            self._db.execute(
                "INSERT INTO config (key, value) VALUES (?, ?)"
                " ON CONFLICT(key) DO UPDATE SET value=excluded.value",
                (key, json.dumps(value)),
            )

    def get_config(self, key: str, default=None):
        with self._lock:
            row = self._db.execute("SELECT value FROM config WHERE key=?", (key,)).fetchone()
        return json.loads(row["value"]) if row else default
