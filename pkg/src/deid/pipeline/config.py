"""Job configuration for batch runs and the review service."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

DATA_DIR_ENV = "DEID_DATA_DIR"


class ConfigError(Exception):
    pass


@dataclass
class JobConfig:
    output_dir: str = "deid_output"
    data_dir: str = field(default_factory=lambda: os.environ.get(DATA_DIR_ENV, "deid_data"))
    recipe_path: Optional[str] = None          # None -> shipped default recipe
    lexicon_dir: Optional[str] = None          # None -> shipped lexicons
    detector_checkpoint: Optional[str] = None  # None -> metadata-only run
    nv_threshold: Optional[float] = None       # None -> checkpoint calibration
    date_shift: bool = True
    fixed_date_offset: Optional[int] = None
    ocr_command: Optional[str] = None          # external OCR adapter command
    use_sidecar_ocr: bool = True
    parallelism: int = 1

    def __post_init__(self):
        if self.nv_threshold is not None and not (0.0 <= self.nv_threshold <= 1.0):
            raise ConfigError(f"nv_threshold {self.nv_threshold} outside [0, 1]")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be at least 1")

    def validate_paths(self) -> None:
        for label, path in (("recipe_path", self.recipe_path),
                            ("lexicon_dir", self.lexicon_dir),
                            ("detector_checkpoint", self.detector_checkpoint)):
            if path is not None and not Path(path).exists():
                raise ConfigError(f"{label} does not exist: {path}")

    @classmethod
    def load(cls, path: Path | str) -> "JobConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        known = {k: v for k, v in doc.items() if k in cls.__dataclass_fields__}
        unknown = set(doc) - set(known)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**known)

    def save(self, path: Path | str) -> None:
        doc = {k: getattr(self, k) for k in self.__dataclass_fields__}
        Path(path).write_text(json.dumps(doc, indent=2) + "\n")
