"""Levenshtein distance and lexicon-driven fuzzy scrubbing.

A flagged term catches near-miss variants: with threshold 1, flagging "john"
also scrubs "Jon". Tokens are whitespace-delimited; non-matching tokens pass
through byte-identical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .._kernels import levenshtein_codes
from ..ner.labels import EntityLabel, EntitySpan

REDACTION_MARK = "[REDACTED]"

_TOKEN_RE = re.compile(r"\S+")


def _codes(s: str) -> np.ndarray:
    return np.array([ord(c) for c in s], dtype=np.uint32)


def levenshtein(a: str, b: str) -> int:
    """Edit distance with unit insert/delete/substitute costs."""
    return int(levenshtein_codes(_codes(a), _codes(b)))


@dataclass
class PhiLexicon:
    """Flagged terms plus the distance threshold for near matches.

    threshold=None selects the length-scaled rule: distance 1 for tokens of
    at most 5 characters, 2 otherwise. Tokens exactly equal to a protected
    word are never treated as near matches (protects routine vocabulary like
    "RIGHT" sitting one edit from a flagged surname).
    """

    terms: frozenset[str]
    threshold: Optional[int] = None
    protected: frozenset[str] = frozenset()
    _by_length: dict[int, list[np.ndarray]] = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        cleaned = frozenset(t.lower() for t in self.terms if t.strip())
        object.__setattr__(self, "terms", cleaned)
        object.__setattr__(self, "protected", frozenset(p.lower() for p in self.protected))
        by_length: dict[int, list[np.ndarray]] = {}
        for term in sorted(cleaned):
            by_length.setdefault(len(term), []).append(_codes(term))
        object.__setattr__(self, "_by_length", by_length)

    def threshold_for(self, token: str) -> int:
        if self.threshold is not None:
            return self.threshold
        return 1 if len(token) <= 5 else 2

    def matches(self, token: str) -> bool:
        if not self.terms:
            return False
        low = token.lower()
        if low in self.terms:
            return True
        if low in self.protected:
            return False
        thr = self.threshold_for(token)
        if thr == 0:
            return False
        codes = _codes(low)
        n = len(low)
        for length in range(max(n - thr, 1), n + thr + 1):
            for term_codes in self._by_length.get(length, ()):
                if levenshtein_codes(codes, term_codes) <= thr:
                    return True
        return False


def lexicon_from_terms(lexicons, threshold: Optional[int] = None) -> PhiLexicon:
    """Standard run lexicon: every word of every lexicon phrase, with the
    imaging/prose vocabulary protected from near-match redaction."""
    from ..ner.detector import _PROTECTED_WORDS

    terms: set[str] = set()
    for phrase in lexicons.all_phrases():
        terms.update(tok for tok in phrase.split() if len(tok) >= 3)
    return PhiLexicon(frozenset(terms), threshold=threshold, protected=_PROTECTED_WORDS)


def fuzzy_scrub(text: str, lexicon: PhiLexicon) -> tuple[str, list[EntitySpan]]:
    """Replace every token within threshold of a flagged term.

    Returns the redacted text and spans over the original text for each
    replaced token.
    """
    if not lexicon.terms:
        return text, []
    pieces: list[str] = []
    spans: list[EntitySpan] = []
    cursor = 0
    for m in _TOKEN_RE.finditer(text):
        if not lexicon.matches(m.group()):
            continue
        pieces.append(text[cursor:m.start()])
        pieces.append(REDACTION_MARK)
        spans.append(EntitySpan(EntityLabel.OTHERPHI, m.start(), m.end(), 1.0))
        cursor = m.end()
    pieces.append(text[cursor:])
    return "".join(pieces), spans
