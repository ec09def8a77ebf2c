"""The synthetic burned-text image corpus with on-disk DICOM + sidecar form.

Images are pure functions of (spec, index): phantom background, zero to four
burned strings, per-burn ground truth. PHI strings render in the block style
at larger scales (patient banners); routine annotations render thin and
small, mirroring how overlays and corner markers differ on real scanners.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from ..detector.boxes import BBox
from ..dicomio import PixelBuffer, Tag, serialize, set_pixels
from ..ner.labels import EntityLabel
from ..ner.lexicon import Lexicons, default_lexicons
from ..ner.synthmeta import generate_metadata
from .burn import burn_text
from .glyphs import GLYPH_H, GLYPH_W
from .phantoms import CONTENT_MAX, MODALITIES, phantom

_SOP_UID = Tag(0x0008, 0x0018)

BURN_INTENSITY = int(CONTENT_MAX * 0.975)

NON_PHI_TEXTS = (
    "AXIAL T2", "SAG T1", "CORONAL", "LEFT", "RIGHT", "PA VIEW", "LAT",
    "SUPINE", "KVP 120", "CHEST PA", "LUNG WINDOW", "BONE", "5MM", "FLAIR",
)


@dataclass(frozen=True)
class Burn:
    text: str
    box: BBox
    is_phi: bool
    label: EntityLabel | None = None

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "box": [self.box.x, self.box.y, self.box.w, self.box.h],
            "is_phi": self.is_phi,
            "label": self.label.value if self.label else None,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Burn":
        return cls(
            text=doc["text"],
            box=BBox(*doc["box"]),
            is_phi=doc["is_phi"],
            label=EntityLabel(doc["label"]) if doc.get("label") else None,
        )


@dataclass(frozen=True)
class SynthImage:
    image_id: str
    split: str
    modality: str
    frame: np.ndarray
    burns: tuple[Burn, ...]
    seed_index: int


@dataclass(frozen=True)
class CorpusSpec:
    counts: tuple[int, int, int] = (8000, 1000, 1000)
    modality_mix: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)
    phi_fraction: float = 0.5
    seed: int = 0
    rows: int = 256
    cols: int = 256
    max_burns: int = 4

    def __post_init__(self):
        if any(c <= 0 for c in self.counts):
            raise ValueError("split counts must be positive")
        if abs(sum(self.modality_mix) - 1.0) > 1e-9:
            raise ValueError("modality mix must sum to 1")
        if not (0.0 <= self.phi_fraction <= 1.0):
            raise ValueError("phi_fraction outside [0,1]")

    @property
    def total(self) -> int:
        return sum(self.counts)

    def split_of(self, index: int) -> str:
        if index < self.counts[0]:
            return "train"
        if index < self.counts[0] + self.counts[1]:
            return "val"
        return "test"

    def modality_of(self, index: int) -> str:
        # Bresenham-style interleave: every prefix (hence every split) tracks
        # the requested mix, and whole-corpus counts land within one image.
        cum = np.cumsum(self.modality_mix)
        for m, c in enumerate(cum):
            if int((index + 1) * c + 1e-9) - int(index * c + 1e-9) >= 1:
                return MODALITIES[m]
        return MODALITIES[-1]


def _phi_burn_text(rng: random.Random, lex: Lexicons) -> tuple[str, EntityLabel]:
    kind = rng.randrange(4)
    if kind == 0:
        return f"{rng.choice(lex.first_names)} {rng.choice(lex.last_names)}".upper(), EntityLabel.PATIENT
    if kind == 1:
        return f"MRN {rng.randint(1000000, 9999999)}", EntityLabel.ID
    if kind == 2:
        return f"{rng.randint(1, 12):02d}/{rng.randint(1, 28):02d}/{rng.randint(1950, 2024)}", EntityLabel.DATE
    return f"{rng.randint(200, 989)}-{rng.randint(200, 989)}-{rng.randint(1000, 9999)}", EntityLabel.PHONE


def generate_image(spec: CorpusSpec, index: int, lexicons: Lexicons | None = None,
                   backgrounds: list[np.ndarray] | None = None) -> SynthImage:
    """Pure per (spec.seed, index); `backgrounds` (e.g. ingested real frames)
    replace the synthetic phantoms when provided."""
    lex = lexicons or default_lexicons()
    rng = random.Random((spec.seed, index).__repr__())
    np_rng = np.random.default_rng(np.random.SeedSequence((spec.seed, index, 77)))
    modality = spec.modality_of(index)
    if backgrounds:
        frame = backgrounds[index % len(backgrounds)].copy()
    else:
        frame = phantom(modality, spec.rows, spec.cols, np_rng)

    burns: list[Burn] = []
    n_burns = rng.randint(0, spec.max_burns)
    placed: list[BBox] = []
    for _ in range(n_burns):
        is_phi = rng.random() < spec.phi_fraction
        if is_phi:
            text, label = _phi_burn_text(rng, lex)
            style, scale = "block", rng.choice((2, 3))
        else:
            text, label = rng.choice(NON_PHI_TEXTS), None
            style, scale = "thin", rng.choice((1, 2))
        for _attempt in range(12):
            approx_w = (GLYPH_W[style] + 1) * len(text) * scale
            approx_h = GLYPH_H[style] * scale
            if approx_w + 4 >= spec.cols or approx_h + 4 >= spec.rows:
                break
            x = rng.randint(2, spec.cols - approx_w - 2)
            y = rng.randint(2, spec.rows - approx_h - 2)
            candidate = BBox.from_corners(x, y, x + approx_w, y + approx_h)
            if any(_touches(candidate, other) for other in placed):
                continue
            frame, box = burn_text(frame, text, (x, y), scale=scale, style=style,
                                   intensity=BURN_INTENSITY)
            burns.append(Burn(text, box, is_phi, label))
            placed.append(candidate)
            break

    return SynthImage(
        image_id=f"img{index:06d}",
        split=spec.split_of(index),
        modality=modality,
        frame=frame,
        burns=tuple(burns),
        seed_index=index,
    )


def _touches(a: BBox, b: BBox, margin: float = 40.0) -> bool:
    # Margin exceeds the proposer's worst-case line-merge distance
    # (1.35 x the tallest glyph line), so separate burns never read as one
    # text line.
    return not (a.x1 + margin < b.x0 or b.x1 + margin < a.x0
                or a.y1 + margin < b.y0 or b.y1 + margin < a.y0)


def generate_corpus(spec: CorpusSpec, split: str | None = None,
                    lexicons: Lexicons | None = None,
                    backgrounds: list[np.ndarray] | None = None) -> Iterator[SynthImage]:
    lex = lexicons or default_lexicons()
    for index in range(spec.total):
        if split is not None and spec.split_of(index) != split:
            continue
        yield generate_image(spec, index, lex, backgrounds)


def to_dataset(image: SynthImage, spec: CorpusSpec):
    """DICOM dataset for one synthetic image (metadata seeded by index)."""
    uid_modality = {"CT": "CT", "MR": "MR", "CR": "CR"}[image.modality]
    ds, truth = generate_metadata(image.seed_index, modality=uid_modality)
    buf = PixelBuffer(spec.rows, spec.cols, 16, "MONOCHROME2", image.frame[None, :, :])
    return set_pixels(ds, buf), truth


def sidecar_record(image: SynthImage) -> dict:
    return {
        "image_id": image.image_id,
        "split": image.split,
        "modality": image.modality,
        "burns": [b.to_dict() for b in image.burns],
    }


def write_corpus(directory: Path | str, spec: CorpusSpec,
                 split: str | None = None) -> tuple[int, Path]:
    """One DICOM file per image plus a JSONL sidecar; returns (count, sidecar)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    sidecar_path = directory / "ground_truth.jsonl"
    count = 0
    with open(sidecar_path, "w") as sidecar:
        for image in generate_corpus(spec, split=split):
            ds, truth = to_dataset(image, spec)
            (directory / f"{image.image_id}.dcm").write_bytes(serialize(ds))
            record = sidecar_record(image)
            record["sop_instance_uid"] = ds.text(_SOP_UID)
            record["metadata_truth"] = [
                [[t.group, t.element], label.value, value] for t, label, value in truth
            ]
            sidecar.write(json.dumps(record) + "\n")
            count += 1
    return count, sidecar_path


def metadata_truth_from_record(record: dict):
    from ..ner.labels import EntityLabel

    return [
        (Tag(t[0], t[1]), EntityLabel(label), value)
        for t, label, value in record.get("metadata_truth", [])
    ]


def load_sidecar(path: Path | str) -> dict[str, dict]:
    """Sidecar records keyed by image id (and by SOP instance UID)."""
    out: dict[str, dict] = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            out[record["image_id"]] = record
            sop = record.get("sop_instance_uid")
            if sop:
                out[sop] = record
    return out

