"""End-to-end file de-identification and batch orchestration.

Metadata first (recipe + detector ensemble + fuzzy scrubbing), then pixels:
propose, classify, route. Confident detections redact immediately; uncertain
ones quarantine the file until every item is adjudicated.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..audit import AuditRecord, content_hash
from ..detector.boxes import BBox
from ..detector.classify import Detection
from ..detector.model import TextDetector
from ..detector.routing import Route, nms, normalize_with_range, route
from ..dicomio import DataSet, DicomError, Tag, get_pixels, parse_file, serialize, set_pixels
from ..dicomio.elements import PixelBuffer
from ..evals.compliance import ComplianceReport, compliance_check
from ..metadeid import (
    DateShiftPolicy,
    DeidContext,
    PhiLexicon,
    Recipe,
    UidMap,
    apply_recipe,
    default_recipe,
    ensemble_detect,
    fuzzy_scrub,
    lexicon_from_terms,
    load_recipe,
)
from ..ner.detector import Detector, ReferenceDetector
from ..ner.labels import EntitySpan
from ..ner.lexicon import default_lexicons, load_lexicons
from ..synth.corpus import Burn, load_sidecar, metadata_truth_from_record
from .config import ConfigError, JobConfig
from .crops import crop_png
from .ocr import OcrAdapter, OcrFailure, SidecarOcr, CommandOcr
from .quarantine import QuarantineItem, QuarantineStore
from .redact import redact_region

_SOP_UID = Tag(0x0008, 0x0018)
_PIXELDATA = Tag(0x7FE0, 0x0010)


class DetectorMissing(Exception):
    pass


@dataclass
class PipelineRuntime:
    """Everything one batch shares: recipe, maps, detector, OCR, store."""

    config: JobConfig
    recipe: Recipe
    lexicon: PhiLexicon
    ner_detectors: list[Detector]
    uid_map: UidMap
    date_policy: Optional[DateShiftPolicy]
    text_detector: Optional[TextDetector]
    ocr: Optional[OcrAdapter]
    sidecar: Optional[SidecarOcr]
    store: QuarantineStore

    @classmethod
    def build(cls, config: JobConfig,
              sidecar_records: Optional[dict] = None) -> "PipelineRuntime":
        config.validate_paths()
        data_dir = Path(config.data_dir)
        data_dir.mkdir(parents=True, exist_ok=True)

        recipe = load_recipe(config.recipe_path) if config.recipe_path else default_recipe()
        lexicons = (load_lexicons(Path(config.lexicon_dir))
                    if config.lexicon_dir else default_lexicons())
        lexicon = lexicon_from_terms(lexicons)
        detectors = [ReferenceDetector(lexicons)]

        uid_path = data_dir / "uid_map.json"
        uid_map = UidMap.load(uid_path) if uid_path.exists() else UidMap()

        date_policy = None
        if config.date_shift:
            date_path = data_dir / "date_offsets.json"
            if date_path.exists():
                date_policy = DateShiftPolicy.load(date_path)
                if config.fixed_date_offset is not None:
                    date_policy.fixed_offset = config.fixed_date_offset
            else:
                date_policy = DateShiftPolicy(fixed_offset=config.fixed_date_offset)

        text_detector = None
        if config.detector_checkpoint:
            text_detector = TextDetector.load(config.detector_checkpoint)

        sidecar = SidecarOcr(sidecar_records) if sidecar_records else None
        ocr: Optional[OcrAdapter] = None
        if config.ocr_command:
            ocr = CommandOcr(config.ocr_command)
        elif config.use_sidecar_ocr and sidecar is not None:
            ocr = sidecar

        store = QuarantineStore(data_dir / "quarantine.db")
        return cls(config, recipe, lexicon, detectors, uid_map, date_policy,
                   text_detector, ocr, sidecar, store)

    def persist_maps(self) -> None:
        data_dir = Path(self.config.data_dir)
        self.uid_map.save(data_dir / "uid_map.json")
        if self.date_policy is not None:
            self.date_policy.save(data_dir / "date_offsets.json")

    def nv_threshold(self) -> float:
        if self.config.nv_threshold is not None:
            return self.config.nv_threshold
        if self.text_detector is not None:
            return self.text_detector.nv_threshold
        return 0.5


@dataclass
class FileOutcome:
    file_id: str
    status: str                 # released | withheld | failed
    output_path: Optional[str] = None
    n_items: int = 0
    error: Optional[str] = None


def text_phi_spans(text: str, runtime: PipelineRuntime) -> list[EntitySpan]:
    """PHI spans in OCR output: detector ensemble union plus fuzzy hits."""
    if not text:
        return []
    spans = list(ensemble_detect(text, runtime.ner_detectors))
    _scrubbed, fuzzy_spans = fuzzy_scrub(text, runtime.lexicon)
    spans.extend(fuzzy_spans)
    return spans


@dataclass
class _PixelOutcome:
    buf: PixelBuffer
    audits: list[AuditRecord] = field(default_factory=list)
    items: list[tuple[QuarantineItem, bytes]] = field(default_factory=list)


def _process_pixels(ds: DataSet, file_id: str, runtime: PipelineRuntime) -> _PixelOutcome:
    detector = runtime.text_detector
    if detector is None:
        raise DetectorMissing("pixel path requires a detector checkpoint")
    buf = get_pixels(ds)
    frames = buf.frames.copy()
    threshold = runtime.nv_threshold()
    outcome = _PixelOutcome(buf=buf)
    item_counter = 0

    for frame_index in range(buf.n_frames):
        frame = frames[frame_index]
        dets = detector.detect_raw(frame, image_id=file_id)
        dets = normalize_with_range(dets, detector.nv_low, detector.nv_high)
        dets = nms(dets, detector.nms_iou)
        for det in dets:
            decision = route(det, threshold)
            if decision is Route.DISCARD:
                continue

            ocr_text, ocr_failed = "", False
            if runtime.ocr is not None:
                try:
                    ocr_text = runtime.ocr(file_id, det.box, frame)
                except OcrFailure:
                    ocr_failed = True

            spans = text_phi_spans(ocr_text, runtime) if ocr_text else []
            if runtime.ocr is not None and not ocr_failed:
                is_phi = bool(spans)
            else:
                is_phi = det.argmax_class == 2  # detector prior fallback

            phi_regions: list[BBox] | None = None
            if runtime.sidecar is not None:
                phi_regions = [b.box for b in runtime.sidecar.burns_for(file_id, det.box)
                               if b.is_phi] or None

            if decision is Route.AUTO_REDACT and not ocr_failed:
                if is_phi:
                    before = content_hash(frame.tobytes())
                    frames[frame_index] = redact_region(frame, det.box, phi_regions, True)
                    frame = frames[frame_index]
                    outcome.audits.append(AuditRecord(
                        file_id=file_id, stage="pixel",
                        target=json.dumps({"frame": frame_index,
                                           "box": [det.box.x, det.box.y, det.box.w, det.box.h]}),
                        action="REDACT_AUTO",
                        before_hash=before,
                        after_hash=content_hash(frame.tobytes()),
                    ))
                continue

            # Quarantine: OCR failures and every high-NV detection.
            item_counter += 1
            proposed = "REDACT" if (is_phi or det.argmax_class == 2) else "KEEP"
            item = QuarantineItem(
                id=f"{file_id}.{frame_index}.{item_counter}",
                file_id=file_id,
                frame_index=frame_index,
                box=det.box,
                nv=det.normalized_var,
                ocr_text=ocr_text,
                spans=[{"label": s.label.value, "start": s.start, "end": s.end,
                        "confidence": s.confidence} for s in spans],
                proposed=proposed,
            )
            outcome.items.append((item, crop_png(frame, det.box)))

    outcome.buf = PixelBuffer(buf.rows, buf.cols, buf.bits_allocated,
                              buf.photometric, frames, buf.samples_per_pixel)
    return outcome


def deidentify_file(path: Path | str, runtime: PipelineRuntime) -> FileOutcome:
    path = Path(path)
    try:
        ds = parse_file(path.read_bytes())
    except DicomError as exc:
        file_id = path.stem
        runtime.store.upsert_file(file_id, str(path), "failed")
        return FileOutcome(file_id, "failed", error=str(exc))

    file_id = ds.text(_SOP_UID) or path.stem
    ctx = DeidContext(
        uid_map=runtime.uid_map,
        date_shift=runtime.date_policy,
        lexicon=runtime.lexicon,
        detectors=runtime.ner_detectors,
        file_id=file_id,
    )
    out_ds, audits = apply_recipe(ds, runtime.recipe, ctx)

    items: list[tuple[QuarantineItem, bytes]] = []
    if runtime.text_detector is not None and _PIXELDATA in out_ds:
        pixel = _process_pixels(out_ds, file_id, runtime)
        out_ds = set_pixels(out_ds, pixel.buf)
        audits.extend(pixel.audits)
        items.extend(pixel.items)

    runtime.store.add_audits(audits)
    payload = serialize(out_ds)

    if items:
        runtime.store.upsert_file(file_id, str(path), "withheld", payload=payload)
        for item, crop in items:
            runtime.store.add_item(item, crop)
        return FileOutcome(file_id, "withheld", n_items=len(items))

    output_path = _release(out_ds, payload, runtime)
    runtime.store.upsert_file(file_id, str(path), "released", output_path=str(output_path))
    return FileOutcome(file_id, "released", output_path=str(output_path))


def _release(out_ds: DataSet, payload: bytes, runtime: PipelineRuntime) -> Path:
    out_dir = Path(runtime.config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    name = out_ds.text(_SOP_UID) or "unnamed"
    output_path = out_dir / f"{name}.dcm"
    output_path.write_bytes(payload)
    return output_path


def finalize_file(file_id: str, runtime: PipelineRuntime,
                  actor: str = "HUMAN:reviewer") -> Optional[str]:
    """Apply resolved decisions and release; None while items are pending."""
    record = runtime.store.file(file_id)
    if record is None or record["status"] != "withheld":
        return record["output_path"] if record else None
    if runtime.store.pending_count(file_id) > 0:
        return None

    ds = parse_file(record["payload"])
    buf = get_pixels(ds)
    frames = buf.frames.copy()
    audits: list[AuditRecord] = []
    for item in runtime.store.file_items(file_id):
        if item.decision == "REJECTED":
            audits.append(AuditRecord(
                file_id=file_id, stage="pixel",
                target=json.dumps({"frame": item.frame_index,
                                   "box": [item.box.x, item.box.y, item.box.w, item.box.h]}),
                action="KEEP_HUMAN", before_hash="", after_hash="", actor=actor,
            ))
            continue
        box = item.decided_box if (item.decision == "EDITED" and item.decided_box) else item.box
        frame = frames[item.frame_index]
        before = content_hash(frame.tobytes())
        frames[item.frame_index] = redact_region(frame, box, None, True)
        audits.append(AuditRecord(
            file_id=file_id, stage="pixel",
            target=json.dumps({"frame": item.frame_index,
                               "box": [box.x, box.y, box.w, box.h]}),
            action="REDACT_HUMAN", before_hash=before,
            after_hash=content_hash(frames[item.frame_index].tobytes()), actor=actor,
        ))

    new_buf = PixelBuffer(buf.rows, buf.cols, buf.bits_allocated,
                          buf.photometric, frames, buf.samples_per_pixel)
    out_ds = set_pixels(ds, new_buf)
    payload = serialize(out_ds)
    output_path = _release(out_ds, payload, runtime)
    runtime.store.add_audits(audits)
    runtime.store.set_file_status(file_id, "released", str(output_path))
    return str(output_path)


@dataclass
class BatchSummary:
    released: int = 0
    withheld: int = 0
    failed: int = 0
    outcomes: list[FileOutcome] = field(default_factory=list)
    compliance: Optional[ComplianceReport] = None

    def to_dict(self) -> dict:
        out = {
            "released": self.released, "withheld": self.withheld,
            "failed": self.failed,
            "files": [
                {"file_id": o.file_id, "status": o.status,
                 "output_path": o.output_path, "items": o.n_items,
                 "error": o.error}
                for o in self.outcomes
            ],
        }
        if self.compliance is not None:
            out["compliance"] = self.compliance.to_dict()
        return out


def run_batch(directory: Path | str, config: JobConfig,
              runtime: Optional[PipelineRuntime] = None) -> BatchSummary:
    """Process every .dcm in a directory; partial failures keep going."""
    directory = Path(directory)
    sidecar_path = directory / "ground_truth.jsonl"
    sidecar_records = load_sidecar(sidecar_path) if sidecar_path.exists() else None
    if runtime is None:
        runtime = PipelineRuntime.build(config, sidecar_records)

    files = sorted(directory.glob("*.dcm"))
    summary = BatchSummary()
    if config.parallelism > 1:
        with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
            outcomes = list(pool.map(lambda p: deidentify_file(p, runtime), files))
    else:
        outcomes = [deidentify_file(p, runtime) for p in files]

    for outcome in outcomes:
        summary.outcomes.append(outcome)
        if outcome.status == "released":
            summary.released += 1
        elif outcome.status == "withheld":
            summary.withheld += 1
        else:
            summary.failed += 1

    runtime.persist_maps()
    _write_audit_log(runtime)

    if sidecar_records is not None:
        summary.compliance = _batch_compliance(files, outcomes, sidecar_records, runtime)
    return summary


def _write_audit_log(runtime: PipelineRuntime) -> None:
    out_dir = Path(runtime.config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "audit.jsonl", "w") as fh:
        for record in runtime.store.audits():
            fh.write(record.to_json() + "\n")


def _batch_compliance(files: list[Path], outcomes: list[FileOutcome],
                      sidecar_records: dict, runtime: PipelineRuntime) -> ComplianceReport:
    report = ComplianceReport()
    for path, outcome in zip(files, outcomes):
        if outcome.status != "released" or outcome.output_path is None:
            continue
        record = sidecar_records.get(outcome.file_id) or sidecar_records.get(path.stem)
        if record is None:
            continue
        original = parse_file(path.read_bytes())
        released = parse_file(Path(outcome.output_path).read_bytes())
        truth = metadata_truth_from_record(record)
        burns = [Burn.from_dict(b) for b in record.get("burns", [])]
        phi_boxes = [b.box for b in burns if b.is_phi]
        original_frame = get_pixels(original).frames[0] if _PIXELDATA in original else None
        released_frame = get_pixels(released).frames[0] if _PIXELDATA in released else None
        report.merge(compliance_check(
            original, released, truth, runtime.recipe,
            lexicon=runtime.lexicon,
            phi_burn_boxes=phi_boxes,
            original_frame=original_frame,
            released_frame=released_frame,
        ))
    return report
