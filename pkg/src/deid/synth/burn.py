"""Burning text into pixel frames."""

from __future__ import annotations

import numpy as np

from ..detector.boxes import BBox
from .glyphs import render_text


class EmptyText(Exception):
    pass


class OutOfBounds(Exception):
    pass


def burn_text(
    frame: np.ndarray,
    text: str,
    position: tuple[int, int],
    scale: int = 1,
    style: str = "thin",
    intensity: int | None = None,
) -> tuple[np.ndarray, BBox]:
    """Render `text` with its top-left ink cell at `position` (x, y).

    Returns the modified copy plus the tight bounding box of changed pixels;
    pixels outside that box are untouched.
    """
    if not text.strip():
        raise EmptyText("refusing to burn empty text")
    mask = render_text(text, style=style, scale=scale)
    h, w = mask.shape
    x, y = position
    rows, cols = frame.shape
    if x < 0 or y < 0 or x + w > cols or y + h > rows:
        raise OutOfBounds(f"text {w}x{h} at ({x},{y}) exceeds {cols}x{rows} frame")
    if intensity is None:
        intensity = int(np.iinfo(frame.dtype).max * 0.95)
    out = frame.copy()
    region = out[y:y + h, x:x + w]
    changed = mask & (region != intensity)
    region[mask] = intensity
    ys, xs = np.nonzero(changed)
    if len(ys) == 0:
        # Every ink pixel already matched the burn intensity; treat the full
        # ink extent as the box so downstream ground truth stays usable.
        ys, xs = np.nonzero(mask)
    box = BBox.from_corners(
        x + float(xs.min()), y + float(ys.min()),
        x + float(xs.max()) + 1.0, y + float(ys.max()) + 1.0,
    )
    return out, box
