"""Uncertainty-aware DICOM de-identification pipeline.

Removes PHI/PII from DICOM metadata (recipe-driven action codes, fuzzy
matching, pluggable NER) and from pixel data (text-region detection with
per-detection uncertainty, OCR, selective redaction). Low-confidence
detections are quarantined for human review behind an HTTP API.
"""

__version__ = "0.1.0"
