"""HTTP review API over the quarantine store.

Versioned JSON endpoints under /api; decisions use an optimistic transition
(second decision on the same item returns 409 and changes nothing). Tag
review rows expose whether the original held a value, never the value
itself.
"""

from __future__ import annotations

import json
from typing import Optional

from fastapi import FastAPI, HTTPException, Response
from pydantic import BaseModel

from ..detector.boxes import BBox
from ..dicomio import parse_file
from ..dicomio.tags import STRING_VRS, Tag, keyword_for
from ..metadeid.actions import ActionCode
from .deid import PipelineRuntime, finalize_file

API_VERSION = "v1"


class DecisionBody(BaseModel):
    decision: str
    box: Optional[list[float]] = None
    actor: str = "reviewer"


class DateShiftBody(BaseModel):
    fixed_offset: Optional[int] = None


def create_app(runtime: PipelineRuntime, ui_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="deid review API", version=API_VERSION)
    store = runtime.store

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    @app.get("/api/queue")
    def queue():
        items = store.pending_items()
        return {
            "items": [item.to_dict() for item in items],
            "count": len(items),
            "withheld_files": [f["id"] for f in store.files("withheld")],
        }

    @app.get("/api/items/{item_id}")
    def item_detail(item_id: str):
        item = store.item(item_id)
        if item is None:
            raise HTTPException(status_code=404, detail="unknown item")
        doc = item.to_dict()
        doc["crop_url"] = f"/api/items/{item_id}/crop"
        return doc

    @app.get("/api/items/{item_id}/crop")
    def item_crop(item_id: str):
        crop = store.item_crop(item_id)
        if crop is None:
            raise HTTPException(status_code=404, detail="unknown item")
        return Response(content=crop, media_type="image/png")

    @app.post("/api/items/{item_id}/decision")
    def decide(item_id: str, body: DecisionBody):
        item = store.item(item_id)
        if item is None:
            raise HTTPException(status_code=404, detail="unknown item")
        if body.decision not in ("APPROVED", "REJECTED", "EDITED"):
            raise HTTPException(status_code=422, detail="decision must be APPROVED, REJECTED or EDITED")
        box = None
        if body.decision == "EDITED":
            if body.box is None or len(body.box) != 4:
                raise HTTPException(status_code=422, detail="EDITED requires box [x, y, w, h]")
            try:
                box = BBox(*[float(v) for v in body.box])
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            if not _box_in_frame(runtime, item.file_id, box):
                raise HTTPException(status_code=422, detail="box outside the source frame")
        accepted = store.decide(item_id, body.decision, f"HUMAN:{body.actor}", box)
        if not accepted:
            raise HTTPException(status_code=409, detail="item is not PENDING")
        output_path = finalize_file(item.file_id, runtime, actor=f"HUMAN:{body.actor}")
        file_record = store.file(item.file_id)
        return {
            "item_id": item_id,
            "decision": body.decision,
            "file_id": item.file_id,
            "file_status": file_record["status"] if file_record else None,
            "output_path": output_path,
        }

    @app.get("/api/files/{file_id}/tags")
    def file_tags(file_id: str):
        record = store.file(file_id)
        if record is None:
            raise HTTPException(status_code=404, detail="unknown file")
        rows = _tag_rows(runtime, record)
        return {"file_id": file_id, "status": record["status"], "tags": rows}

    @app.post("/api/config/date-shift")
    def config_date_shift(body: DateShiftBody):
        offset = body.fixed_offset
        if offset is not None and (offset == 0 or abs(offset) > 3650):
            raise HTTPException(status_code=422,
                                detail="fixed_offset must be nonzero and within +-3650 days")
        store.set_config("date_shift_fixed_offset", offset)
        if runtime.date_policy is not None:
            runtime.date_policy.fixed_offset = offset
        runtime.config.fixed_date_offset = offset
        return {"fixed_offset": offset}

    @app.get("/api/report")
    def report():
        files = store.files()
        counts = {"released": 0, "withheld": 0, "failed": 0}
        for f in files:
            counts[f["status"]] = counts.get(f["status"], 0) + 1
        return {
            "files": counts,
            "pending_items": len(store.pending_items()),
            "date_shift_fixed_offset": store.get_config("date_shift_fixed_offset"),
            "nv_threshold": runtime.nv_threshold(),
        }

    @app.get("/api/audit/{file_id}")
    def audit(file_id: str):
        records = store.audits(file_id)
        if not records and store.file(file_id) is None:
            raise HTTPException(status_code=404, detail="unknown file")
        return {"file_id": file_id,
                "records": [json.loads(r.to_json()) for r in records]}

    return app


def _box_in_frame(runtime: PipelineRuntime, file_id: str, box: BBox) -> bool:
    record = runtime.store.file(file_id)
    if record is None or record["payload"] is None:
        return True  # nothing to validate against
    ds = parse_file(record["payload"])
    rows = ds.number(Tag(0x0028, 0x0010))
    cols = ds.number(Tag(0x0028, 0x0011))
    if rows is None or cols is None:
        return True
    return box.x0 >= 0 and box.y0 >= 0 and box.x1 <= cols and box.y1 <= rows


def _tag_rows(runtime: PipelineRuntime, record: dict) -> list[dict]:
    from pathlib import Path

    original = parse_file(Path(record["source_path"]).read_bytes())
    result = None
    if record["payload"] is not None:
        result = parse_file(record["payload"])
    elif record["output_path"]:
        result = parse_file(Path(record["output_path"]).read_bytes())

    rows = []
    tags = set(original.elements) | (set(result.elements) if result else set())
    for tag in sorted(tags):
        if tag == Tag(0x7FE0, 0x0010):
            continue
        entry = runtime.recipe.resolve(tag)
        action = entry.action if entry else (
            runtime.recipe.private_tag_action if tag.is_private else runtime.recipe.default_action
        )
        before = original.get(tag)
        after = result.get(tag) if result else None
        after_text = None
        if after is not None and (after.vr == "UI" or after.vr in STRING_VRS):
            after_text = after.decode_text(result.codec())
        rows.append({
            "tag": str(tag),
            "name": keyword_for(tag),
            "had_value": before is not None and (len(before.raw) > 0 or len(before.items) > 0),
            "action": action.value if isinstance(action, ActionCode) else str(action),
            "result": after_text if after is not None else None,
            "present": after is not None,
        })
    return rows
