"""Display crops: window-level normalized 8-bit PNG snippets.

Display only; redaction always happens on the original bit depth.
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image

from ..detector.boxes import BBox


def crop_region(frame: np.ndarray, box: BBox, margin: int = 8) -> np.ndarray:
    h, w = frame.shape
    x0 = max(int(box.x0) - margin, 0)
    y0 = max(int(box.y0) - margin, 0)
    x1 = min(int(np.ceil(box.x1)) + margin, w)
    y1 = min(int(np.ceil(box.y1)) + margin, h)
    return frame[y0:y1, x0:x1]


def window_level(frame: np.ndarray) -> np.ndarray:
    """Percentile windowing to 8-bit for display."""
    arr = frame.astype(np.float64)
    lo, hi = np.percentile(arr, (1.0, 99.5))
    if hi <= lo:
        return np.zeros(frame.shape, dtype=np.uint8)
    scaled = np.clip((arr - lo) / (hi - lo), 0.0, 1.0)
    return (scaled * 255).astype(np.uint8)


def crop_png(frame: np.ndarray, box: BBox, margin: int = 8) -> bytes:
    crop = window_level(crop_region(frame, box, margin))
    image = Image.fromarray(crop, mode="L")
    buf = io.BytesIO()
    image.save(buf, format="PNG")
    return buf.getvalue()


def frame_png(frame: np.ndarray) -> bytes:
    image = Image.fromarray(window_level(frame), mode="L")
    buf = io.BytesIO()
    image.save(buf, format="PNG")
    return buf.getvalue()
