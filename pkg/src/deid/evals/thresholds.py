"""Uncertainty-vs-IoU thresholding and the quadrant analysis."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class UncertaintyPoint:
    nv: float
    iou: float


@dataclass(frozen=True)
class QuadrantReport:
    tp: int  # correct detection, low uncertainty
    fn: int  # correct detection, high uncertainty
    tn: int  # incorrect detection, high uncertainty
    fp: int  # incorrect detection, low uncertainty
    nv_thresh: float

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.tn + self.fp

    @property
    def fnr(self) -> float:
        return self.fn / self.total if self.total else 0.0


def iou_threshold(points: list[UncertaintyPoint], iou_cut: float = 0.5) -> float:
    """Largest uncertainty threshold with zero false positives.

    A detection is a false positive under threshold u when its IoU falls
    below the cut while its NV sits below u, so the bound is the smallest NV
    among bad detections; 1.0 when every detection clears the cut.
    """
    if not points:
        raise ValueError("no points")
    bad = [p.nv for p in points if p.iou < iou_cut]
    if not bad:
        return 1.0
    return min(bad)


def quadrants(points: list[UncertaintyPoint], nv_thresh: float,
              iou_cut: float = 0.5) -> QuadrantReport:
    tp = fn = tn = fp = 0
    for p in points:
        correct = p.iou >= iou_cut
        confident = p.nv < nv_thresh
        if correct and confident:
            tp += 1
        elif correct:
            fn += 1
        elif confident:
            fp += 1
        else:
            tn += 1
    return QuadrantReport(tp, fn, tn, fp, nv_thresh)
