"""Reference PHI detector: pattern rules plus gazetteer matching.

Any callable `text -> list[EntitySpan]` satisfies the detector contract, so a
model-backed detector can be plugged in wherever this one is used. Rule hits
carry confidence 1.0; fuzzy gazetteer hits carry 0.8.
"""

from __future__ import annotations

import re
from typing import Callable, Iterable

import numpy as np

from .._kernels import levenshtein_codes
from .labels import EntityLabel, EntitySpan
from .lexicon import Lexicons, default_lexicons

Detector = Callable[[str], list[EntitySpan]]

_MONTHS = ("January", "February", "March", "April", "May", "June", "July",
           "August", "September", "October", "November", "December")
_MONTH_ALT = "|".join(_MONTHS)

_EMAIL_RE = re.compile(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}")
_PHONE_RE = re.compile(r"(?:\(\d{3}\)\s?|\d{3}[-.])\d{3}[-.]\d{4}")
_SSN_RE = re.compile(r"\b\d{3}-\d{2}-\d{4}\b")
_POLICY_RE = re.compile(r"(?i)\bpolicy(?:\s+no\.?|\s+number)?[:#]?\s*([A-Z]{1,4}-?\d{4,})")
_DATE_RES = (
    re.compile(r"\b\d{2}/\d{2}/\d{4}\b"),
    re.compile(r"\b\d{4}-\d{2}-\d{2}\b"),
    re.compile(rf"\b(?:{_MONTH_ALT}) \d{{1,2}}, \d{{4}}\b"),
    re.compile(rf"\b\d{{1,2}} (?:{_MONTH_ALT}) \d{{4}}\b"),
)
_COMPACT_DATE_RE = re.compile(r"\b(\d{4})(\d{2})(\d{2})\b")
_ID_PREFIXED_RE = re.compile(r"\b[A-Z]{2,4}-?\d{5,}\b")
_ID_CUE_RE = re.compile(
    r"(?i)(?:mrn|medical record|record|account|case|accession|patient\s?id|\bid\b)"
    r"\s*(?:number|no\.?|#)?\s*[:#]?\s*"
)
_DIGIT_RUN_RE = re.compile(r"\b\d{5,}\b")
_AGE_RES = (
    re.compile(r"\b(\d{1,3})(?=[- ]year[- ]old\b)"),
    re.compile(r"\b(\d{1,3})(?= years? old\b)"),
    re.compile(r"(?i)(?<=\bage)[:\s]+(\d{1,3})\b"),
    re.compile(r"\b(\d{1,3})(?=Y\b)"),
)
_NAME_TOKEN_RE = re.compile(r"\b(?:[A-Z][a-z]+|[A-Z]{2,})\b")
_STAFF_CUE_RE = re.compile(r"(?i)(?:\bdr\.?\s*$|\bdoctor\s*$|physician|attending|referred by|pcp)")
_STAFF_SUFFIX_RE = re.compile(r"^\s*,?\s*(?:MD|DO|RN|NP|PA)\b")

# Never produce *fuzzy* name hits for these; routine imaging, anatomy and
# prose words sitting one edit away from a lexicon surname.
_PROTECTED_WORDS = frozenset(
    {"right", "left", "axial", "coronal", "sagittal", "upright", "supine",
     "prone", "might", "night", "light", "slight", "bright", "white",
     "wide", "price", "gross", "cross", "mild", "agree", "scan", "screen",
     "chest", "wrist", "bone", "brain", "spine", "knee", "lung", "pelvis",
     "abdomen", "head", "neck", "view", "window"}
)


def _phrase_pattern(phrases: Iterable[str]) -> re.Pattern | None:
    escaped = [re.escape(p) for p in sorted(phrases, key=len, reverse=True) if p]
    if not escaped:
        return None
    return re.compile(r"\b(?:" + "|".join(escaped) + r")\b", re.IGNORECASE)


class ReferenceDetector:
    """Deterministic gazetteer + rule detector over the shipped lexicons."""

    def __init__(self, lexicons: Lexicons | None = None, fuzzy_names: bool = True):
        self.lexicons = lexicons or default_lexicons()
        self.fuzzy_names = fuzzy_names
        self._hospital_re = _phrase_pattern(self.lexicons.hospitals)
        self._city_re = _phrase_pattern(self.lexicons.cities)
        self._org_re = _phrase_pattern(self.lexicons.organizations)
        street_alt = "|".join(re.escape(s) for s in self.lexicons.streets)
        self._address_re = re.compile(rf"\b\d{{1,5}} (?:{street_alt})\b") if street_alt else None
        self._first = {t.lower() for t in self.lexicons.first_names}
        self._last = {t.lower() for t in self.lexicons.last_names}
        self._name_codes = [
            np.array([ord(c) for c in t], dtype=np.uint32)
            for t in sorted(self._first | self._last)
        ]

    def __call__(self, text: str) -> list[EntitySpan]:
        raw: list[EntitySpan] = []
        raw.extend(self._pattern_spans(text))
        raw.extend(self._gazetteer_spans(text))
        raw.extend(self._name_spans(text))
        return resolve_overlaps(raw)

    def _pattern_spans(self, text: str) -> list[EntitySpan]:
        spans: list[EntitySpan] = []
        for m in _EMAIL_RE.finditer(text):
            spans.append(EntitySpan(EntityLabel.EMAIL, m.start(), m.end()))
        for m in _PHONE_RE.finditer(text):
            spans.append(EntitySpan(EntityLabel.PHONE, m.start(), m.end()))
        for m in _SSN_RE.finditer(text):
            spans.append(EntitySpan(EntityLabel.OTHERPHI, m.start(), m.end()))
        for m in _POLICY_RE.finditer(text):
            spans.append(EntitySpan(EntityLabel.OTHERPHI, m.start(1), m.end(1)))
        for rex in _DATE_RES:
            for m in rex.finditer(text):
                spans.append(EntitySpan(EntityLabel.DATE, m.start(), m.end()))
        for m in _COMPACT_DATE_RE.finditer(text):
            month, day = int(m.group(2)), int(m.group(3))
            year = int(m.group(1))
            if 1 <= month <= 12 and 1 <= day <= 31 and 1900 <= year <= 2100:
                spans.append(EntitySpan(EntityLabel.DATE, m.start(), m.end()))
        for m in _ID_PREFIXED_RE.finditer(text):
            spans.append(EntitySpan(EntityLabel.ID, m.start(), m.end()))
        for m in _DIGIT_RUN_RE.finditer(text):
            lead = text[max(0, m.start() - 24):m.start()]
            if _ID_CUE_RE.search(lead):
                spans.append(EntitySpan(EntityLabel.ID, m.start(), m.end()))
        for rex in _AGE_RES:
            for m in rex.finditer(text):
                if 0 < int(m.group(1)) <= 120:
                    spans.append(EntitySpan(EntityLabel.AGE, m.start(1), m.end(1)))
        return spans

    def _gazetteer_spans(self, text: str) -> list[EntitySpan]:
        spans: list[EntitySpan] = []
        pairs = (
            (self._hospital_re, EntityLabel.HOSPITAL),
            (self._city_re, EntityLabel.LOCATION),
            (self._org_re, EntityLabel.PATORG),
        )
        for rex, label in pairs:
            if rex is None:
                continue
            for m in rex.finditer(text):
                spans.append(EntitySpan(label, m.start(), m.end()))
        if self._address_re is not None:
            for m in self._address_re.finditer(text):
                spans.append(EntitySpan(EntityLabel.LOCATION, m.start(), m.end()))
        return spans

    def _name_spans(self, text: str) -> list[EntitySpan]:
        # Maximal runs of known name tokens separated by single spaces become
        # one span; surrounding context decides PATIENT vs STAFF.
        hits: list[tuple[int, int, float]] = []
        for m in _NAME_TOKEN_RE.finditer(text):
            token = m.group().lower()
            if token in self._first or token in self._last:
                hits.append((m.start(), m.end(), 1.0))
            elif self.fuzzy_names and len(token) >= 4 and token not in _PROTECTED_WORDS:
                codes = np.array([ord(c) for c in token], dtype=np.uint32)
                for name_codes in self._name_codes:
                    if abs(len(name_codes) - len(codes)) <= 1 and levenshtein_codes(codes, name_codes) <= 1:
                        hits.append((m.start(), m.end(), 0.8))
                        break
        spans: list[EntitySpan] = []
        i = 0
        while i < len(hits):
            start, end, conf = hits[i]
            j = i + 1
            while j < len(hits) and hits[j][0] == end + 1:
                end = hits[j][1]
                conf = min(conf, hits[j][2])
                j += 1
            label = self._classify_name(text, start, end)
            spans.append(EntitySpan(label, start, end, conf))
            i = j
        return spans

    def _classify_name(self, text: str, start: int, end: int) -> EntityLabel:
        lead = text[max(0, start - 24):start]
        if _STAFF_CUE_RE.search(lead) or _STAFF_SUFFIX_RE.match(text[end:end + 6]):
            return EntityLabel.STAFF
        return EntityLabel.PATIENT


def resolve_overlaps(spans: list[EntitySpan]) -> list[EntitySpan]:
    """Keep the longest span among overlaps (ties: higher confidence, earlier)."""
    ordered = sorted(spans, key=lambda s: (-(s.end - s.start), -s.confidence, s.start, s.label.value))
    kept: list[EntitySpan] = []
    for span in ordered:
        if not any(span.overlaps(k) for k in kept):
            kept.append(span)
    kept.sort(key=lambda s: (s.start, s.end))
    return kept


_DEFAULT_DETECTOR: ReferenceDetector | None = None


def detect_entities(text: str) -> list[EntitySpan]:
    """Detector contract entry point backed by the reference implementation."""
    global _DEFAULT_DETECTOR
    if _DEFAULT_DETECTOR is None:
        _DEFAULT_DETECTOR = ReferenceDetector()
    return _DEFAULT_DETECTOR(text)
