"""Evaluation metrics: mAP, noise sweep, thresholds, objective, compliance."""

from .compliance import (
    ComplianceReport,
    ComplianceRow,
    burn_readable,
    collect_texts,
    compliance_check,
    load_rules,
    value_survives,
)
from .mapscore import (
    COCO_THRESHOLDS,
    MapReport,
    ScoredBox,
    TruthBox,
    average_precision,
    map_at,
)
from .objective import ObjectiveWeights, objective, s_noise_from_slope
from .sweep import (
    CLEAN_CUTOFF_SNR,
    NoCleanRungs,
    SweepReport,
    mean_uncertainty,
    noise_slope,
    pooled_variance,
    v_clean,
)
from .thresholds import QuadrantReport, UncertaintyPoint, iou_threshold, quadrants

__all__ = [
    "CLEAN_CUTOFF_SNR",
    "COCO_THRESHOLDS",
    "ComplianceReport",
    "ComplianceRow",
    "MapReport",
    "NoCleanRungs",
    "ObjectiveWeights",
    "QuadrantReport",
    "ScoredBox",
    "SweepReport",
    "TruthBox",
    "UncertaintyPoint",
    "average_precision",
    "burn_readable",
    "collect_texts",
    "compliance_check",
    "iou_threshold",
    "load_rules",
    "map_at",
    "mean_uncertainty",
    "noise_slope",
    "objective",
    "pooled_variance",
    "quadrants",
    "s_noise_from_slope",
    "v_clean",
]
