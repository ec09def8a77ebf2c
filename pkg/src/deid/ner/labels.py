"""PHI entity labels and spans."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class EntityLabel(str, Enum):
    AGE = "AGE"
    DATE = "DATE"
    EMAIL = "EMAIL"
    HOSPITAL = "HOSPITAL"
    ID = "ID"
    LOCATION = "LOCATION"
    OTHERPHI = "OTHERPHI"
    PATIENT = "PATIENT"
    PATORG = "PATORG"
    PHONE = "PHONE"
    STAFF = "STAFF"


@dataclass(frozen=True)
class EntitySpan:
    """A labeled character range with detector confidence."""

    label: EntityLabel
    start: int
    end: int
    confidence: float = 1.0

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise ValueError(f"bad span range [{self.start}, {self.end})")
        if not (0.0 <= self.confidence <= 1.0):
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")

    def overlaps(self, other: "EntitySpan") -> bool:
        return self.start < other.end and other.start < self.end

    def length(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class LabeledNote:
    """Synthetic admission note text with its gold entity spans."""

    text: str
    spans: tuple[EntitySpan, ...]
    seed: int


@dataclass(frozen=True)
class TagValueLine:
    """One rendered "TagName: value" context line for short-field detection."""

    tag_name: str
    value: str

    @property
    def rendered(self) -> str:
        return f"{self.tag_name}: {self.value}"

    def to_value_offset(self, rendered_offset: int) -> int:
        return rendered_offset - len(self.tag_name) - 2
