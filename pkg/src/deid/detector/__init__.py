"""Text-region detection with per-detection uncertainty routing."""

from .anchors import kmeans_anchors, nearest_anchor
from .boxes import (
    AnchorBox,
    BBox,
    BoxDelta,
    decode_batch,
    decode_box,
    encode_batch,
    encode_box,
    iou,
    iou_matrix,
)
from .classify import CLASS_NAMES, Detection, classify, drop_background
from .model import TextDetector, collect_detections, train_detector
from .proposals import N_FEATURES, Proposal, contrast_mask, extract_features, propose_regions
from .routing import Route, nms, normalize_variance, normalize_with_range, route
from .training import LabeledProposals, build_labeled_set

__all__ = [
    "AnchorBox",
    "BBox",
    "BoxDelta",
    "CLASS_NAMES",
    "Detection",
    "LabeledProposals",
    "N_FEATURES",
    "Proposal",
    "Route",
    "TextDetector",
    "build_labeled_set",
    "classify",
    "collect_detections",
    "contrast_mask",
    "decode_batch",
    "decode_box",
    "drop_background",
    "encode_batch",
    "encode_box",
    "extract_features",
    "iou",
    "iou_matrix",
    "kmeans_anchors",
    "nearest_anchor",
    "nms",
    "normalize_variance",
    "normalize_with_range",
    "propose_regions",
    "route",
    "train_detector",
]
