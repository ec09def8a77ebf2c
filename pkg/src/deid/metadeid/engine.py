"""Recipe application over datasets, plus the detector ensemble union."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..audit import AuditRecord, content_hash
from ..dicomio import DataSet, Tag
from ..dicomio.elements import DataElement, element_from_numbers, element_from_text
from ..ner.detector import Detector
from ..ner.labels import EntitySpan
from .actions import ActionCode, dummy_for
from .dates import DateShiftPolicy, shift_da_value, shift_dt_value
from .fuzzy import PhiLexicon, REDACTION_MARK, fuzzy_scrub
from .recipe import Recipe
from .uids import UidMap

_NUMERIC_ZERO_VRS = frozenset({"US", "UL", "SS", "SL", "FL", "FD"})


@dataclass
class DeidContext:
    """Shared state for one de-identification run."""

    uid_map: UidMap = field(default_factory=UidMap)
    date_shift: Optional[DateShiftPolicy] = None
    lexicon: Optional[PhiLexicon] = None
    detectors: Sequence[Detector] = ()
    file_id: str = ""


def ensemble_detect(text: str, detectors: Sequence[Detector]) -> list[EntitySpan]:
    """Union of every detector's spans; overlaps merge into their covering
    interval and keep the label of the longest contributor."""
    if not detectors:
        raise ValueError("ensemble_detect requires at least one detector")
    collected: list[EntitySpan] = []
    for detector in detectors:
        collected.extend(detector(text))
    if not collected:
        return []
    collected.sort(key=lambda s: (s.start, -(s.end - s.start)))
    merged: list[EntitySpan] = []
    current = collected[0]
    longest = collected[0]
    for span in collected[1:]:
        if span.start < current.end:  # strict overlap
            if span.length() > longest.length():
                longest = span
            current = EntitySpan(
                longest.label,
                current.start,
                max(current.end, span.end),
                max(current.confidence, span.confidence),
            )
        else:
            merged.append(current)
            current = span
            longest = span
    merged.append(current)
    return merged


def _redact_spans(text: str, spans: Sequence[EntitySpan]) -> str:
    out = []
    cursor = 0
    for span in sorted(spans, key=lambda s: s.start):
        if span.start < cursor:
            continue
        out.append(text[cursor:span.start])
        out.append(REDACTION_MARK)
        cursor = span.end
    out.append(text[cursor:])
    return "".join(out)


def clean_text(text: str, ctx: DeidContext) -> str:
    """The C action for free text: detector ensemble union plus fuzzy scrub."""
    spans: list[EntitySpan] = []
    if ctx.detectors:
        spans.extend(ensemble_detect(text, ctx.detectors))
    if ctx.lexicon is not None:
        _scrubbed, fuzzy_spans = fuzzy_scrub(text, ctx.lexicon)
        spans.extend(fuzzy_spans)
    if not spans:
        return text
    return _redact_spans(text, spans)


def _patient_key(ds: DataSet, ctx: DeidContext) -> str:
    if ctx.date_shift is None:
        return ""
    return ds.text(ctx.date_shift.key_element, "")


_IDENTITY_REMOVED = Tag(0x0012, 0x0062)
_DEID_METHOD = Tag(0x0012, 0x0063)


def apply_recipe(
    ds: DataSet,
    recipe: Recipe,
    ctx: DeidContext,
) -> tuple[DataSet, list[AuditRecord]]:
    """Apply action codes to every element, recursing into sequences.

    Returns the transformed dataset and one audit record per changed element.
    Output is stamped with PatientIdentityRemoved=YES; already-stamped input
    passes through untouched, making reprocessing idempotent.
    """
    already = ds.get(_IDENTITY_REMOVED)
    if already is not None and already.decode_text().strip() == "YES":
        return ds, []

    patient_key = _patient_key(ds, ctx)
    audits: list[AuditRecord] = []
    new_elements = _apply_to_elements(ds, ds.elements, recipe, ctx, patient_key, audits, path="")
    new_elements[_IDENTITY_REMOVED] = element_from_text(_IDENTITY_REMOVED, "CS", "YES")
    new_elements[_DEID_METHOD] = element_from_text(_DEID_METHOD, "LO", "deid recipe pipeline")
    out = DataSet(ds.transfer_syntax, dict(ds.meta), new_elements, ds.undefined_item_length)

    # Keep the meta-group SOP instance reference consistent with the body remap.
    sop = out.get(Tag(0x0008, 0x0018))
    if sop is not None and Tag(0x0002, 0x0003) in out.meta:
        out.meta[Tag(0x0002, 0x0003)] = DataElement(Tag(0x0002, 0x0003), "UI", sop.raw)
    return out, audits


def _apply_to_elements(
    ds: DataSet,
    elements: dict[Tag, DataElement],
    recipe: Recipe,
    ctx: DeidContext,
    patient_key: str,
    audits: list[AuditRecord],
    path: str,
) -> dict[Tag, DataElement]:
    codec = ds.codec()
    out: dict[Tag, DataElement] = {}
    for tag in sorted(elements):
        elem = elements[tag]
        entry = recipe.resolve(tag)
        action = entry.action if entry is not None else (
            recipe.private_tag_action if tag.is_private else recipe.default_action
        )
        target = f"{path}{tag}"

        if action is ActionCode.K:
            out[tag] = elem
            continue

        if action is ActionCode.X:
            audits.append(_record(ctx, target, "X", elem, None))
            continue

        if action is ActionCode.Z:
            replaced = DataElement(tag, elem.vr, b"", (), False)
            if replaced != elem:
                audits.append(_record(ctx, target, "Z", elem, replaced))
            out[tag] = replaced
            continue

        if action is ActionCode.U:
            replaced = _remap_element(elem, ctx.uid_map)
            if replaced != elem:
                audits.append(_record(ctx, target, "U", elem, replaced))
            out[tag] = replaced
            continue

        if action is ActionCode.D:
            replaced = _dummy_element(elem, ctx, entry.dummy if entry else None, codec)
            if replaced != elem:
                audits.append(_record(ctx, target, "D", elem, replaced))
            out[tag] = replaced
            continue

        # C: clean. Sequences recurse; dates shift under an active policy;
        # other text runs the detector ensemble plus fuzzy scrubbing.
        if elem.vr == "SQ" or elem.items:
            new_items = []
            for idx, item in enumerate(elem.items):
                new_map = _apply_to_elements(
                    ds, item.elements, recipe, ctx, patient_key, audits,
                    path=f"{target}[{idx}]/",
                )
                new_item = DataSet(item.transfer_syntax, {}, new_map, item.undefined_item_length)
                new_items.append(new_item)
            out[tag] = DataElement(tag, elem.vr, b"", tuple(new_items), elem.undefined_length)
            continue

        replaced = _clean_element(elem, ctx, patient_key, codec)
        if replaced != elem:
            audits.append(_record(ctx, target, "C", elem, replaced))
        out[tag] = replaced
    return out


def _record(ctx: DeidContext, target: str, action: str,
            before: DataElement, after: DataElement | None) -> AuditRecord:
    return AuditRecord(
        file_id=ctx.file_id,
        stage="metadata",
        target=target,
        action=action,
        before_hash=content_hash(before.raw),
        after_hash=content_hash(after.raw) if after is not None else "",
    )


def _remap_element(elem: DataElement, uid_map: UidMap) -> DataElement:
    text = elem.decode_text() if elem.raw else ""
    if not text:
        return elem
    remapped = "\\".join(uid_map.remap(part) for part in text.split("\\"))
    return element_from_text(elem.tag, elem.vr, remapped)


def _dummy_element(elem: DataElement, ctx: DeidContext,
                   override: str | None, codec: str) -> DataElement:
    if elem.vr == "UI":
        return _remap_element(elem, ctx.uid_map)
    value = dummy_for(elem.tag, elem.vr, override)
    if elem.vr in _NUMERIC_ZERO_VRS:
        return element_from_numbers(elem.tag, elem.vr, [value])
    return element_from_text(elem.tag, elem.vr, str(value), codec)


def _clean_element(elem: DataElement, ctx: DeidContext,
                   patient_key: str, codec: str) -> DataElement:
    if elem.vr == "DA" and ctx.date_shift is not None:
        value = elem.decode_text()
        if not value:
            return elem
        shifted = shift_da_value(value, ctx.date_shift.offset_for(patient_key))
        return element_from_text(elem.tag, elem.vr, shifted)
    if elem.vr == "DT" and ctx.date_shift is not None:
        value = elem.decode_text()
        if not value:
            return elem
        shifted = shift_dt_value(value, ctx.date_shift.offset_for(patient_key))
        return element_from_text(elem.tag, elem.vr, shifted)
    try:
        text = elem.decode_text(codec)
    except Exception:
        return elem  # non-text under C: left as-is
    cleaned = clean_text(text, ctx)
    if cleaned == text:
        return elem
    return element_from_text(elem.tag, elem.vr, cleaned, codec)
