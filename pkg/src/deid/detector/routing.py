"""Batch variance normalization, NMS and uncertainty-threshold routing."""

from __future__ import annotations

from dataclasses import replace
from enum import Enum

import numpy as np

from .boxes import iou
from .classify import Detection


class Route(str, Enum):
    AUTO_REDACT = "AUTO_REDACT"
    QUARANTINE = "QUARANTINE"
    DISCARD = "DISCARD"


def normalize_variance(dets: list[Detection]) -> list[Detection]:
    """Min-max scale raw uncertainty over this batch population.

    Fewer than two distinct raw values maps everything to 0.
    """
    if not dets:
        return []
    raw = np.array([d.raw_uncertainty for d in dets])
    lo, hi = float(raw.min()), float(raw.max())
    if hi <= lo:
        return [replace(d, normalized_var=0.0) for d in dets]
    return [replace(d, normalized_var=float((d.raw_uncertainty - lo) / (hi - lo))) for d in dets]


def normalize_with_range(dets: list[Detection], lo: float, hi: float) -> list[Detection]:
    """Normalization against a frozen range (e.g. the validation batch),
    clipped into [0, 1]; used at inference so thresholds stay comparable."""
    if hi <= lo:
        return [replace(d, normalized_var=0.0) for d in dets]
    return [
        replace(d, normalized_var=float(np.clip((d.raw_uncertainty - lo) / (hi - lo), 0.0, 1.0)))
        for d in dets
    ]


def nms(dets: list[Detection], iou_cut: float = 0.5) -> list[Detection]:
    """Greedy by descending objectness; ties prefer smaller normalized
    variance, then smaller box x."""
    order = sorted(
        dets,
        key=lambda d: (-d.objectness,
                       d.normalized_var if d.normalized_var >= 0 else 2.0,
                       d.box.x),
    )
    kept: list[Detection] = []
    for det in order:
        if all(iou(det.box, k.box) < iou_cut for k in kept):
            kept.append(det)
    return kept


def route(det: Detection, threshold: float) -> Route:
    """Background goes nowhere; confident detections redact automatically;
    everything else waits for a human."""
    if det.normalized_var < 0:
        raise ValueError("normalized_var not set; run normalize_variance first")
    if det.is_background:
        return Route.DISCARD
    if det.normalized_var < threshold:
        return Route.AUTO_REDACT
    return Route.QUARANTINE
