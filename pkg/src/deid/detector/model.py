"""The trained text detector: head + anchors + calibration in one artifact."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..ner.lexicon import Lexicons
from ..synth.corpus import CorpusSpec, generate_corpus
from ..vdp.head import DetectionHead
from ..vdp.losses import LossCoefficients
from ..vdp.train import TrainConfig, TrainResult, train
from .classify import Detection, classify
from .proposals import propose_regions
from .routing import nms, normalize_variance, normalize_with_range
from .training import build_labeled_set

DETECTOR_VERSION = 1


@dataclass
class TextDetector:
    head: DetectionHead
    anchor_templates: np.ndarray
    nms_iou: float = 0.5
    nv_low: float = 0.0
    nv_high: float = 1.0
    nv_threshold: float = 0.5
    trajectory: list[float] = field(default_factory=list)

    def detect_raw(self, frame: np.ndarray, image_id: str = "") -> list[Detection]:
        """Classified proposals, before NMS and NV normalization."""
        proposals = propose_regions(frame)
        return classify(proposals, self.head, self.anchor_templates,
                        image_size=frame.shape, image_id=image_id)

    def detect(self, frame: np.ndarray, image_id: str = "") -> list[Detection]:
        """Inference path: frozen-range NV, then NMS."""
        dets = self.detect_raw(frame, image_id)
        dets = normalize_with_range(dets, self.nv_low, self.nv_high)
        return nms(dets, self.nms_iou)

    # -- persistence ---------------------------------------------------------

    def save(self, path) -> None:
        arrays = self.head.to_arrays()
        arrays["anchor_templates"] = self.anchor_templates
        meta = {
            "version": DETECTOR_VERSION,
            "nms_iou": self.nms_iou,
            "nv_low": self.nv_low,
            "nv_high": self.nv_high,
            "nv_threshold": self.nv_threshold,
        }
        arrays["detector_meta_json"] = np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8)
        arrays["trajectory"] = np.array(self.trajectory)
        np.savez_compressed(path, **arrays)

    @classmethod
    def load(cls, path) -> "TextDetector":
        with np.load(path) as data:
            arrays = {k: data[k] for k in data.files}
        meta = json.loads(bytes(arrays["detector_meta_json"].tolist()).decode())
        if meta["version"] != DETECTOR_VERSION:
            raise ValueError(f"detector checkpoint version {meta['version']} unsupported")
        return cls(
            head=DetectionHead.from_arrays(arrays),
            anchor_templates=np.array(arrays["anchor_templates"]),
            nms_iou=meta["nms_iou"],
            nv_low=meta["nv_low"],
            nv_high=meta["nv_high"],
            nv_threshold=meta["nv_threshold"],
            trajectory=[float(v) for v in arrays.get("trajectory", [])],
        )


def train_detector(
    spec: CorpusSpec,
    coeffs: LossCoefficients,
    config: TrainConfig,
    lexicons: Lexicons | None = None,
    hidden: tuple[int, ...] = (64, 32),
) -> tuple[TextDetector, TrainResult]:
    """Train on the corpus train split with the given loss coefficients."""
    labeled = build_labeled_set(spec, "train", lexicons=lexicons)
    head = DetectionHead(
        in_dim=labeled.batch.features.shape[1],
        hidden=hidden,
        seed=config.seed,
        feature_mean=labeled.feature_mean,
        feature_std=labeled.feature_std,
    )
    result = train(head, labeled.batch, coeffs, config)
    detector = TextDetector(head, labeled.anchor_templates,
                            trajectory=result.trajectory)
    return detector, result


def collect_detections(
    detector: TextDetector,
    spec: CorpusSpec,
    split: str,
    lexicons: Lexicons | None = None,
    frame_transform=None,
) -> tuple[dict[str, list[Detection]], dict[str, list]]:
    """Run the detector over a split: batch-normalized NV, then per-image NMS.

    Returns (detections per image, ground-truth burns per image).
    """
    raw: list[Detection] = []
    truths: dict[str, list] = {}
    for image in generate_corpus(spec, split=split, lexicons=lexicons):
        frame = image.frame if frame_transform is None else frame_transform(image)
        raw.extend(detector.detect_raw(frame, image.image_id))
        truths[image.image_id] = list(image.burns)
    normalized = normalize_variance(raw)
    per_image: dict[str, list[Detection]] = {image_id: [] for image_id in truths}
    for det in normalized:
        per_image.setdefault(det.image_id, []).append(det)
    return {k: nms(v, detector.nms_iou) for k, v in per_image.items()}, truths
