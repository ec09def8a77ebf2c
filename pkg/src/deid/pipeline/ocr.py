"""OCR adapters: the synthetic sidecar oracle and the subprocess contract."""

from __future__ import annotations

import subprocess
import tempfile
from pathlib import Path
from typing import Protocol

import numpy as np

from ..detector.boxes import BBox, iou
from ..synth.corpus import Burn
from .crops import crop_png


class OcrFailure(Exception):
    pass


class OcrAdapter(Protocol):
    def __call__(self, image_id: str, box: BBox, crop: np.ndarray) -> str: ...


class SidecarOcr:
    """Reference adapter: reads ground truth keyed by (image id, box overlap).

    Burns overlapping the query box at IoU >= 0.5 (or fully contained) are
    returned left to right.
    """

    def __init__(self, records: dict[str, dict]):
        self._burns: dict[str, list[Burn]] = {}
        for key, record in records.items():
            self._burns[key] = [Burn.from_dict(b) for b in record.get("burns", [])]

    def burns_for(self, image_id: str, box: BBox) -> list[Burn]:
        hits = []
        for burn in self._burns.get(image_id, []):
            overlap = iou(box, burn.box)
            contained = (burn.box.x0 >= box.x0 - 1 and burn.box.x1 <= box.x1 + 1
                         and burn.box.y0 >= box.y0 - 1 and burn.box.y1 <= box.y1 + 1)
            if overlap >= 0.5 or contained:
                hits.append(burn)
        return sorted(hits, key=lambda b: b.box.x0)

    def __call__(self, image_id: str, box: BBox, crop: np.ndarray) -> str:
        return " ".join(b.text for b in self.burns_for(image_id, box))


class CommandOcr:
    """External engine contract: crop goes to a temporary image file, the
    configured command runs with that path as its final argument, recognized
    text comes back on stdout; a nonzero exit raises OcrFailure."""

    def __init__(self, command: str, timeout: float = 30.0):
        self.argv = command.split()
        self.timeout = timeout

    def __call__(self, image_id: str, box: BBox, crop: np.ndarray) -> str:
        png = crop_png(crop, BBox(crop.shape[1] / 2, crop.shape[0] / 2,
                                  max(crop.shape[1], 1), max(crop.shape[0], 1)), margin=0)
        with tempfile.NamedTemporaryFile(suffix=".png", delete=False) as tmp:
            tmp.write(png)
            tmp_path = tmp.name
        try:
            proc = subprocess.run(
                [*self.argv, tmp_path],
                capture_output=True, timeout=self.timeout,
            )
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise OcrFailure(f"adapter invocation failed: {exc}") from exc
        finally:
            Path(tmp_path).unlink(missing_ok=True)
        if proc.returncode != 0:
            raise OcrFailure(f"adapter exited {proc.returncode}: {proc.stderr.decode(errors='replace')[:200]}")
        return proc.stdout.decode(errors="replace").strip()
