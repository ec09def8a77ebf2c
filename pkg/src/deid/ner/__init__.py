"""PHI entity detection and the synthetic labeled corpora that exercise it."""

from .detector import Detector, ReferenceDetector, detect_entities, resolve_overlaps
from .labels import EntityLabel, EntitySpan, LabeledNote, TagValueLine
from .lexicon import Lexicons, default_lexicons, load_lexicons
from .notes import generate_note
from .synthmeta import generate_metadata
from .tagvalues import tag_value_lines

__all__ = [
    "Detector",
    "EntityLabel",
    "EntitySpan",
    "LabeledNote",
    "Lexicons",
    "ReferenceDetector",
    "TagValueLine",
    "default_lexicons",
    "detect_entities",
    "generate_metadata",
    "generate_note",
    "load_lexicons",
    "resolve_overlaps",
    "tag_value_lines",
]
