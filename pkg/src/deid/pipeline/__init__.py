"""Orchestration: batch runs, quarantine, review API."""

from .config import ConfigError, DATA_DIR_ENV, JobConfig
from .crops import crop_png, crop_region, frame_png, window_level
from .deid import (
    BatchSummary,
    DetectorMissing,
    FileOutcome,
    PipelineRuntime,
    deidentify_file,
    finalize_file,
    run_batch,
    text_phi_spans,
)
from .ocr import CommandOcr, OcrAdapter, OcrFailure, SidecarOcr
from .quarantine import DECISIONS, QuarantineItem, QuarantineStore
from .redact import redact_region
from .server import create_app

__all__ = [
    "BatchSummary",
    "CommandOcr",
    "ConfigError",
    "DATA_DIR_ENV",
    "DECISIONS",
    "DetectorMissing",
    "FileOutcome",
    "JobConfig",
    "OcrAdapter",
    "OcrFailure",
    "PipelineRuntime",
    "QuarantineItem",
    "QuarantineStore",
    "SidecarOcr",
    "create_app",
    "crop_png",
    "crop_region",
    "deidentify_file",
    "finalize_file",
    "frame_png",
    "redact_region",
    "run_batch",
    "text_phi_spans",
    "window_level",
]
