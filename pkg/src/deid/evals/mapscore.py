"""Mean average precision over detection/truth sets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..detector.boxes import BBox, iou


@dataclass(frozen=True)
class ScoredBox:
    image_id: str
    box: BBox
    label: int
    score: float


@dataclass(frozen=True)
class TruthBox:
    image_id: str
    box: BBox
    label: int


@dataclass
class MapReport:
    per_class: dict[float, dict[int, float]]  # iou threshold -> class -> AP
    map_at_iou: dict[float, float]

    @property
    def map50(self) -> float:
        return self.map_at_iou.get(0.5, 0.0)

    @property
    def map75(self) -> float:
        return self.map_at_iou.get(0.75, 0.0)

    @property
    def map50_95(self) -> float:
        rungs = [t for t in self.map_at_iou if 0.5 <= t <= 0.95]
        if not rungs:
            return 0.0
        return float(np.mean([self.map_at_iou[t] for t in sorted(rungs)]))


def average_precision(recall: np.ndarray, precision: np.ndarray) -> float:
    """All-points interpolation: integral of the precision envelope."""
    r = np.concatenate([[0.0], recall, [1.0]])
    p = np.concatenate([[0.0], precision, [0.0]])
    for i in range(len(p) - 2, -1, -1):
        p[i] = max(p[i], p[i + 1])
    idx = np.where(r[1:] != r[:-1])[0]
    return float(np.sum((r[idx + 1] - r[idx]) * p[idx + 1]))


def _ap_single_class(dets: list[ScoredBox], truths: list[TruthBox],
                     iou_thresh: float) -> float:
    if not truths:
        return 0.0
    if not dets:
        return 0.0
    truth_by_image: dict[str, list[TruthBox]] = {}
    for t in truths:
        truth_by_image.setdefault(t.image_id, []).append(t)
    consumed: dict[str, set[int]] = {k: set() for k in truth_by_image}

    order = sorted(dets, key=lambda d: -d.score)
    tp = np.zeros(len(order))
    fp = np.zeros(len(order))
    for i, det in enumerate(order):
        candidates = truth_by_image.get(det.image_id, [])
        best_iou, best_j = 0.0, -1
        for j, truth in enumerate(candidates):
            if j in consumed[det.image_id]:
                continue
            value = iou(det.box, truth.box)
            if value > best_iou:
                best_iou, best_j = value, j
        if best_j >= 0 and best_iou >= iou_thresh:
            consumed[det.image_id].add(best_j)
            tp[i] = 1
        else:
            fp[i] = 1
    cum_tp = np.cumsum(tp)
    cum_fp = np.cumsum(fp)
    recall = cum_tp / len(truths)
    precision = cum_tp / np.maximum(cum_tp + cum_fp, 1e-12)
    return average_precision(recall, precision)


def map_at(
    dets: list[ScoredBox],
    truths: list[TruthBox],
    iou_thresholds: tuple[float, ...] = (0.5,),
) -> MapReport:
    """Greedy score-ordered matching, one truth consumed per detection;
    classes averaged with equal weight."""
    labels = sorted({t.label for t in truths})
    per_class: dict[float, dict[int, float]] = {}
    map_at_iou: dict[float, float] = {}
    for thresh in iou_thresholds:
        by_class = {}
        for label in labels:
            by_class[label] = _ap_single_class(
                [d for d in dets if d.label == label],
                [t for t in truths if t.label == label],
                thresh,
            )
        per_class[thresh] = by_class
        map_at_iou[thresh] = float(np.mean(list(by_class.values()))) if by_class else 0.0
    return MapReport(per_class, map_at_iou)


COCO_THRESHOLDS = tuple(np.round(np.arange(0.5, 1.0, 0.05), 2))
