"""Center-format boxes, anchor-relative deltas and IoU."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .._kernels import pairwise_iou


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box: center (x, y) and positive extents (w, h)."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if not (self.w > 0 and self.h > 0):
            raise ValueError(f"non-positive extents {self.w}x{self.h}")

    @property
    def x0(self) -> float:
        return self.x - self.w / 2

    @property
    def y0(self) -> float:
        return self.y - self.h / 2

    @property
    def x1(self) -> float:
        return self.x + self.w / 2

    @property
    def y1(self) -> float:
        return self.y + self.h / 2

    @property
    def area(self) -> float:
        return self.w * self.h

    @classmethod
    def from_corners(cls, x0: float, y0: float, x1: float, y1: float) -> "BBox":
        return cls((x0 + x1) / 2, (y0 + y1) / 2, x1 - x0, y1 - y0)

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.w, self.h], dtype=np.float64)

    def clipped(self, width: float, height: float) -> "BBox":
        x0, y0 = max(self.x0, 0.0), max(self.y0, 0.0)
        x1, y1 = min(self.x1, width), min(self.y1, height)
        if x1 <= x0 or y1 <= y0:
            raise ValueError("box entirely outside the frame")
        return BBox.from_corners(x0, y0, x1, y1)


class AnchorBox(BBox):
    """Reference box whose offsets parameterize the regression targets."""


@dataclass(frozen=True)
class BoxDelta:
    tx: float
    ty: float
    tw: float
    th: float

    def __post_init__(self):
        for v in (self.tx, self.ty, self.tw, self.th):
            if not math.isfinite(v):
                raise ValueError(f"non-finite delta {v}")

    def to_array(self) -> np.ndarray:
        return np.array([self.tx, self.ty, self.tw, self.th], dtype=np.float64)


def encode_box(box: BBox, anchor: AnchorBox) -> BoxDelta:
    """Anchor-relative parameterization: offsets scaled by the anchor extent,
    log-ratio sizes."""
    return BoxDelta(
        (box.x - anchor.x) / anchor.w,
        (box.y - anchor.y) / anchor.h,
        math.log(box.w / anchor.w),
        math.log(box.h / anchor.h),
    )


def decode_box(delta: BoxDelta, anchor: AnchorBox) -> BBox:
    """Exact algebraic inverse of encode_box."""
    return BBox(
        delta.tx * anchor.w + anchor.x,
        delta.ty * anchor.h + anchor.y,
        math.exp(delta.tw) * anchor.w,
        math.exp(delta.th) * anchor.h,
    )


def iou(a: BBox, b: BBox) -> float:
    iw = min(a.x1, b.x1) - max(a.x0, b.x0)
    if iw <= 0:
        return 0.0
    ih = min(a.y1, b.y1) - max(a.y0, b.y0)
    if ih <= 0:
        return 0.0
    inter = iw * ih
    return inter / (a.area + b.area - inter)


def iou_matrix(a: list[BBox], b: list[BBox]) -> np.ndarray:
    if not a or not b:
        return np.zeros((len(a), len(b)))
    arr_a = np.stack([box.to_array() for box in a])
    arr_b = np.stack([box.to_array() for box in b])
    return pairwise_iou(arr_a, arr_b)


def encode_batch(boxes: np.ndarray, anchors: np.ndarray) -> np.ndarray:
    """Vectorized encode over (n, 4) center-format arrays."""
    out = np.empty_like(boxes)
    out[:, 0] = (boxes[:, 0] - anchors[:, 0]) / anchors[:, 2]
    out[:, 1] = (boxes[:, 1] - anchors[:, 1]) / anchors[:, 3]
    out[:, 2] = np.log(boxes[:, 2] / anchors[:, 2])
    out[:, 3] = np.log(boxes[:, 3] / anchors[:, 3])
    return out


def decode_batch(deltas: np.ndarray, anchors: np.ndarray) -> np.ndarray:
    out = np.empty_like(deltas)
    out[:, 0] = deltas[:, 0] * anchors[:, 2] + anchors[:, 0]
    out[:, 1] = deltas[:, 1] * anchors[:, 3] + anchors[:, 1]
    out[:, 2] = np.exp(deltas[:, 2]) * anchors[:, 2]
    out[:, 3] = np.exp(deltas[:, 3]) * anchors[:, 3]
    return out
