"""Pixel redaction honoring the least-damage rule."""

from __future__ import annotations

import numpy as np

from ..detector.boxes import BBox


def _clip_region(frame: np.ndarray, box: BBox) -> tuple[int, int, int, int]:
    h, w = frame.shape
    x0 = max(int(np.floor(box.x0)), 0)
    y0 = max(int(np.floor(box.y0)), 0)
    x1 = min(int(np.ceil(box.x1)), w)
    y1 = min(int(np.ceil(box.y1)), h)
    return x0, y0, x1, y1


def redact_region(
    frame: np.ndarray,
    box: BBox,
    phi_regions: list[BBox] | None = None,
    any_phi: bool = True,
) -> np.ndarray:
    """Zero PHI pixels inside `box`.

    When PHI sub-regions are known (synthetic ground truth), only those are
    zeroed; otherwise the whole box is zeroed if any span is PHI. Without PHI
    the frame comes back untouched. No pixel outside `box` ever changes.
    """
    if not any_phi:
        return frame
    out = frame.copy()
    bx0, by0, bx1, by1 = _clip_region(frame, box)
    targets = phi_regions if phi_regions else [box]
    for region in targets:
        x0, y0, x1, y1 = _clip_region(frame, region)
        x0, y0 = max(x0, bx0), max(y0, by0)
        x1, y1 = min(x1, bx1), min(y1, by1)
        if x1 > x0 and y1 > y0:
            out[y0:y1, x0:x1] = 0
    return out
