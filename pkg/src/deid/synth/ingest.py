"""Optional background ingestion: use real DICOM frames as corpus canvases.

Keeps the repo network-free by default (synthetic phantoms); pointing the
generator at a directory of uncompressed DICOM files swaps those frames in
as backgrounds, rescaled under the burn intensity so ink stays the
brightest structure.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..dicomio import DicomError, get_pixels, parse_file
from .phantoms import BACKGROUND_CAP


def load_backgrounds(directory: Path | str, rows: int, cols: int,
                     limit: int | None = None) -> list[np.ndarray]:
    """Frames from every parseable DICOM under `directory`, resized with
    nearest-neighbor sampling and rescaled into the background intensity
    budget."""
    frames: list[np.ndarray] = []
    for path in sorted(Path(directory).glob("*.dcm")):
        if limit is not None and len(frames) >= limit:
            break
        try:
            ds = parse_file(path.read_bytes())
            buf = get_pixels(ds)
        except DicomError:
            continue
        frame = buf.frames[0].astype(np.float64)
        ys = np.clip((np.arange(rows) * frame.shape[0] / rows).astype(np.int64),
                     0, frame.shape[0] - 1)
        xs = np.clip((np.arange(cols) * frame.shape[1] / cols).astype(np.int64),
                     0, frame.shape[1] - 1)
        frame = frame[np.ix_(ys, xs)]
        lo, hi = float(frame.min()), float(frame.max())
        if hi > lo:
            frame = (frame - lo) / (hi - lo) * BACKGROUND_CAP
        else:
            frame = np.zeros_like(frame)
        frames.append(frame.astype(np.uint16))
    return frames
