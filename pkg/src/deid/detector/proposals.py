"""Heuristic text-region proposals over grayscale frames.

High-contrast pixels (image minus local background) become connected
components; components are merged along text lines into proposal boxes, and
each box gets a fixed engineered feature vector for the classification head.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._kernels import box_fill_stats, label_components
from .boxes import BBox

N_FEATURES = 10

# Burned ink is the brightest structure in a frame (phantom content is
# capped well below the burn intensity), so the mask keys on absolute
# brightness relative to the frame's dynamic range. Salt noise lands at the
# same level, which is what makes false proposals appear under heavy noise.
_BRIGHT_FRACTION = 0.85
_MIN_COMPONENT_PX = 2
_LINE_GAP_FACTOR = 1.35
_MIN_BOX_W = 2
_MIN_BOX_H = 2


@dataclass(frozen=True)
class Proposal:
    box: BBox
    features: np.ndarray


def contrast_mask(frame: np.ndarray) -> np.ndarray:
    lo = float(frame.min())
    dyn = float(frame.max()) - lo
    if dyn <= 0:
        return np.zeros(frame.shape, dtype=np.uint8)
    return (frame.astype(np.float64) >= lo + _BRIGHT_FRACTION * dyn).astype(np.uint8)


def _component_boxes(labels: np.ndarray, count: int) -> list[tuple[int, int, int, int]]:
    boxes = []
    ys, xs = np.nonzero(labels)
    if len(ys) == 0:
        return boxes
    labs = labels[ys, xs]
    order = np.argsort(labs, kind="stable")
    ys, xs, labs = ys[order], xs[order], labs[order]
    starts = np.searchsorted(labs, np.arange(1, count + 1))
    ends = np.append(starts[1:], len(labs))
    for s, e in zip(starts, ends):
        if e - s < _MIN_COMPONENT_PX:
            continue
        boxes.append((int(xs[s:e].min()), int(ys[s:e].min()),
                      int(xs[s:e].max()) + 1, int(ys[s:e].max()) + 1))
    return boxes


def _merge_lines(comps: list[tuple[int, int, int, int]]) -> list[tuple[list, int]]:
    """Greedy left-to-right clustering into text lines.

    Returns [(corner box, component count)].
    """
    comps = sorted(comps, key=lambda c: (c[0], c[1]))
    clusters: list[list] = []  # [x0, y0, x1, y1, count, line_h]
    for (x0, y0, x1, y1) in comps:
        h = y1 - y0
        cy = (y0 + y1) / 2
        joined = False
        for cl in clusters:
            line_h = max(cl[5], h)
            gap = x0 - cl[2]
            c_cy = (cl[1] + cl[3]) / 2
            if gap <= _LINE_GAP_FACTOR * line_h and abs(cy - c_cy) <= 0.6 * line_h:
                cl[0] = min(cl[0], x0)
                cl[1] = min(cl[1], y0)
                cl[2] = max(cl[2], x1)
                cl[3] = max(cl[3], y1)
                cl[4] += 1
                cl[5] = max(cl[5], h)
                joined = True
                break
        if not joined:
            clusters.append([x0, y0, x1, y1, 1, h])
    return [([c[0], c[1], c[2], c[3]], c[4]) for c in clusters]


def extract_features(frame: np.ndarray, mask: np.ndarray,
                     corners: list, comp_count: int) -> np.ndarray:
    """Fixed engineered descriptor for one proposal box."""
    h_img, w_img = frame.shape
    x0, y0, x1, y1 = (int(v) for v in corners)
    w, h = x1 - x0, y1 - y0
    dyn = max(float(frame.max()) - float(frame.min()), 1.0)

    fill, transitions_per_row = box_fill_stats(mask, x0, y0, x1, y1)

    inside = frame[y0:y1, x0:x1].astype(np.float64)
    rx0, ry0 = max(x0 - 6, 0), max(y0 - 6, 0)
    rx1, ry1 = min(x1 + 6, w_img), min(y1 + 6, h_img)
    ring_region = frame[ry0:ry1, rx0:rx1].astype(np.float64)
    ring_sum = ring_region.sum() - inside.sum()
    ring_n = max(ring_region.size - inside.size, 1)
    ring_mean = ring_sum / ring_n
    ring_sq = (ring_region ** 2).sum() - (inside ** 2).sum()
    ring_var = max(ring_sq / ring_n - ring_mean ** 2, 0.0)

    return np.array([
        w / w_img,
        h / h_img,
        np.log(w / h),
        fill,
        transitions_per_row / max(w, 1),
        (inside.mean() - ring_mean) / dyn,
        inside.std() / dyn,
        np.sqrt(ring_var) / dyn,
        np.log1p(comp_count),
        (inside.max() - ring_mean) / dyn,
    ], dtype=np.float64)


def propose_regions(frame: np.ndarray) -> list[Proposal]:
    """Candidate text boxes with features; empty on blank frames."""
    mask = contrast_mask(frame)
    if not mask.any():
        return []
    labels, count = label_components(mask)
    comps = _component_boxes(labels, count)
    proposals: list[Proposal] = []
    for corners, comp_count in _merge_lines(comps):
        x0, y0, x1, y1 = corners
        if (x1 - x0) < _MIN_BOX_W or (y1 - y0) < _MIN_BOX_H:
            continue
        feats = extract_features(frame, mask, corners, comp_count)
        proposals.append(Proposal(BBox.from_corners(x0, y0, x1, y1), feats))
    return proposals
