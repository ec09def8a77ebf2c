"""Classification of proposals with per-detection uncertainty."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..vdp.head import DetectionHead, N_CLASSES
from .anchors import anchor_features, nearest_anchor
from .boxes import BBox, BoxDelta, decode_box
from .proposals import Proposal

CLASS_NAMES = ("background", "text", "phi_text")


@dataclass(frozen=True)
class Detection:
    box: BBox
    class_mean: np.ndarray       # probabilities over CLASS_NAMES
    class_var: np.ndarray
    objectness: float            # 1 - P(background)
    raw_uncertainty: float       # variance of the argmax class probability
    normalized_var: float = -1.0  # set by normalize_variance
    image_id: str = ""

    @property
    def argmax_class(self) -> int:
        return int(np.argmax(self.class_mean))

    @property
    def is_background(self) -> bool:
        return self.argmax_class == 0

    def to_dict(self) -> dict:
        return {
            "image_id": self.image_id,
            "box": [self.box.x, self.box.y, self.box.w, self.box.h],
            "class_mean": [float(v) for v in self.class_mean],
            "class_var": [float(v) for v in self.class_var],
            "objectness": self.objectness,
            "raw_uncertainty": self.raw_uncertainty,
            "normalized_var": self.normalized_var,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Detection":
        return cls(
            box=BBox(*doc["box"]),
            class_mean=np.array(doc["class_mean"]),
            class_var=np.array(doc["class_var"]),
            objectness=float(doc["objectness"]),
            raw_uncertainty=float(doc["raw_uncertainty"]),
            normalized_var=float(doc.get("normalized_var", -1.0)),
            image_id=doc.get("image_id", ""),
        )


def classify(
    proposals: list[Proposal],
    head: DetectionHead,
    anchor_templates: np.ndarray,
    image_size: tuple[int, int] | None = None,
    image_id: str = "",
    refine_boxes: bool = True,
) -> list[Detection]:
    """One Detection per proposal; box refined by the regression output
    relative to the proposal-centered anchor template."""
    if not proposals:
        return []
    anchors = [nearest_anchor(p.box, anchor_templates) for p in proposals]
    feats = np.stack([
        np.concatenate([p.features, anchor_features(p.box, a)])
        for p, a in zip(proposals, anchors)
    ])
    class_mean, class_var, deltas = head.predict(feats)
    out: list[Detection] = []
    for i, prop in enumerate(proposals):
        box = prop.box
        if refine_boxes:
            try:
                box = decode_box(BoxDelta(*deltas[i]), anchors[i])
                if image_size is not None:
                    box = box.clipped(image_size[1], image_size[0])
            except (ValueError, OverflowError):
                box = prop.box
        probs = class_mean[i]
        argmax = int(np.argmax(probs))
        out.append(Detection(
            box=box,
            class_mean=probs,
            class_var=class_var[i],
            objectness=float(1.0 - probs[0]),
            raw_uncertainty=float(class_var[i][argmax]),
            image_id=image_id,
        ))
    return out


def drop_background(dets: list[Detection]) -> list[Detection]:
    return [d for d in dets if not d.is_background]


def with_image_id(dets: list[Detection], image_id: str) -> list[Detection]:
    return [replace(d, image_id=image_id) for d in dets]
