"""Compliance rule battery over (original, de-identified) dataset pairs.

Rules ship as data so categories extend without code changes; each rule
scores pass/fail instances and the report aggregates per subcategory.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

import numpy as np

from ..detector.boxes import BBox
from ..dicomio import DataSet, Tag
from ..dicomio.tags import STRING_VRS
from ..metadeid.actions import ActionCode
from ..metadeid.fuzzy import PhiLexicon, levenshtein
from ..metadeid.recipe import Recipe
from ..ner.labels import EntityLabel

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+")
_PIXEL_DATA = Tag(0x7FE0, 0x0010)


@dataclass
class ComplianceRow:
    category: str
    subcategory: str
    fail: int = 0
    passed: int = 0

    @property
    def total(self) -> int:
        return self.fail + self.passed

    @property
    def rate(self) -> float:
        return self.passed / self.total if self.total else 1.0


@dataclass
class ComplianceReport:
    rows: list[ComplianceRow] = field(default_factory=list)

    def row(self, category: str, subcategory: str) -> ComplianceRow:
        for r in self.rows:
            if r.subcategory == subcategory:
                return r
        r = ComplianceRow(category, subcategory)
        self.rows.append(r)
        return r

    def merge(self, other: "ComplianceReport") -> "ComplianceReport":
        for r in other.rows:
            mine = self.row(r.category, r.subcategory)
            mine.fail += r.fail
            mine.passed += r.passed
        return self

    @property
    def total_fail(self) -> int:
        return sum(r.fail for r in self.rows)

    @property
    def total_passed(self) -> int:
        return sum(r.passed for r in self.rows)

    @property
    def total_rate(self) -> float:
        total = self.total_fail + self.total_passed
        return self.total_passed / total if total else 1.0

    def format_table(self) -> str:
        lines = [f"{'category':8} {'subcategory':22} {'Fail':>6} {'Pass':>8} {'Total':>8}  %"]
        for r in sorted(self.rows, key=lambda r: (r.category, r.subcategory)):
            lines.append(
                f"{r.category:8} {r.subcategory:22} {r.fail:>6} {r.passed:>8}"
                f" {r.total:>8}  ({r.rate:.4f})"
            )
        total = self.total_fail + self.total_passed
        lines.append(
            f"{'Total':31} {self.total_fail:>6} {self.total_passed:>8}"
            f" {total:>8}  ({self.total_rate:.4f})"
        )
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "rows": [
                {"category": r.category, "subcategory": r.subcategory,
                 "fail": r.fail, "pass": r.passed, "rate": r.rate}
                for r in sorted(self.rows, key=lambda r: (r.category, r.subcategory))
            ],
            "total": {"fail": self.total_fail, "pass": self.total_passed,
                      "rate": self.total_rate},
        }


def load_rules() -> list[dict]:
    text = resources.files("deid.evals").joinpath("data/compliance_rules.json").read_text()
    return json.loads(text)


# -- text residual scanning ---------------------------------------------------

def collect_texts(ds: DataSet) -> list[str]:
    out: list[str] = []

    def walk(elements):
        for elem in elements.values():
            if elem.items:
                for item in elem.items:
                    walk(item.elements)
            elif elem.vr == "UI" or elem.vr in STRING_VRS:
                try:
                    out.append(elem.decode_text("latin-1"))
                except Exception:
                    continue

    walk(ds.elements)
    return out


def value_survives(texts: list[str], value: str,
                   lexicon: Optional[PhiLexicon] = None) -> bool:
    """True when the injected value (or a near variant of an alphabetic
    token) still appears in the texts."""
    protected = lexicon.protected if lexicon is not None else frozenset()
    hay_tokens: set[str] = set()
    norm_texts = []
    for t in texts:
        low = " ".join(t.lower().split())
        norm_texts.append(low)
        hay_tokens.update(_TOKEN_RE.findall(low))

    norm_value = " ".join(value.replace("^", " ").lower().split())
    if len(norm_value) >= 3 and any(norm_value in t for t in norm_texts):
        return True
    for token in _TOKEN_RE.findall(norm_value):
        # Pure digit fragments under five digits are not identifying alone
        # (the phrase check above still catches complete numbers).
        if len(token) < 3 or (token.isdigit() and len(token) < 5):
            continue
        if token in hay_tokens:
            return True
        if token.isalpha() and len(token) >= 4:
            thr = lexicon.threshold_for(token) if lexicon is not None else (1 if len(token) <= 5 else 2)
            for hay in hay_tokens:
                if hay in protected or not hay.isalpha():
                    continue
                if abs(len(hay) - len(token)) <= thr and levenshtein(token, hay) <= thr:
                    return True
    return False


# -- pixel oracle --------------------------------------------------------------

def burn_readable(original: np.ndarray, released: np.ndarray, box: BBox,
                  survival_cut: float = 0.5) -> bool:
    """True when at least `survival_cut` of the burn's ink pixels survive."""
    lo = float(original.min())
    dyn = float(original.max()) - lo
    if dyn <= 0:
        return False
    y0, y1 = max(int(box.y0), 0), min(int(np.ceil(box.y1)), original.shape[0])
    x0, x1 = max(int(box.x0), 0), min(int(np.ceil(box.x1)), original.shape[1])
    orig_patch = original[y0:y1, x0:x1]
    rel_patch = released[y0:y1, x0:x1]
    ink = orig_patch.astype(np.float64) >= lo + 0.85 * dyn
    if not ink.any():
        return False
    survived = (orig_patch == rel_patch) & ink
    return float(survived.sum()) / float(ink.sum()) >= survival_cut


# -- the rule battery ----------------------------------------------------------

def compliance_check(
    original: DataSet,
    deid: DataSet,
    truth: list[tuple[Tag, EntityLabel, str]],
    recipe: Recipe,
    lexicon: Optional[PhiLexicon] = None,
    phi_burn_boxes: Optional[list[BBox]] = None,
    original_frame: Optional[np.ndarray] = None,
    released_frame: Optional[np.ndarray] = None,
    rules: Optional[list[dict]] = None,
) -> ComplianceReport:
    """Score every rule instance over one file pair."""
    rules = rules if rules is not None else load_rules()
    report = ComplianceReport()
    deid_texts = collect_texts(deid)

    for rule in rules:
        row = report.row(rule["category"], rule["id"])
        predicate = rule["predicate"]

        if predicate == "required_present_nonempty":
            for pattern in rule["tags"]:
                tag = _parse_tag(pattern)
                elem = deid.get(tag)
                ok = elem is not None and (len(elem.raw) > 0 or len(elem.items) > 0)
                _score(row, ok)
        elif predicate == "required_present":
            for pattern in rule["tags"]:
                ok = deid.get(_parse_tag(pattern)) is not None
                _score(row, ok)
        elif predicate == "label_absent":
            wanted = {EntityLabel(l) for l in rule["labels"]}
            for _tag, label, value in truth:
                if label in wanted:
                    _score(row, not value_survives(deid_texts, value, lexicon))
        elif predicate == "uids_remapped":
            for elem in original.iter_elements():
                if elem.vr != "UI":
                    continue
                if recipe.action_for(elem.tag) is not ActionCode.U:
                    continue
                after = deid.get(elem.tag)
                ok = (after is not None and after.raw != elem.raw
                      and _valid_uid(after.decode_text()))
                _score(row, ok)
        elif predicate == "cleaned_no_truth_phi":
            truth_values = [v for (_t, _l, v) in truth]
            for elem in original.iter_elements():
                if recipe.action_for(elem.tag) is not ActionCode.C:
                    continue
                if elem.vr == "SQ" or elem.vr == "DA" or elem.vr == "DT":
                    continue
                after = deid.get(elem.tag)
                texts = [after.decode_text("latin-1")] if after is not None else []
                ok = not any(value_survives(texts, v, lexicon) for v in truth_values)
                _score(row, ok)
        elif predicate == "action_conform":
            action = ActionCode(rule["action"])
            for elem in original.iter_elements():
                if elem.tag == _PIXEL_DATA:
                    continue  # governed by the pixel path; scored by TCIA-PIX
                if recipe.action_for(elem.tag) is not action:
                    continue
                _score(row, _conforms(elem, deid, action))
        elif predicate == "no_phi_burn_readable":
            if phi_burn_boxes is None or original_frame is None or released_frame is None:
                continue
            for box in phi_burn_boxes:
                _score(row, not burn_readable(original_frame, released_frame, box))
        else:
            raise ValueError(f"unknown predicate {predicate!r}")
    return report


def _score(row: ComplianceRow, ok: bool) -> None:
    if ok:
        row.passed += 1
    else:
        row.fail += 1


def _parse_tag(pattern: str) -> Tag:
    group, element = pattern.split(",")
    return Tag(int(group, 16), int(element, 16))


def _valid_uid(uid: str) -> bool:
    return 0 < len(uid) <= 64 and all(c.isdigit() or c == "." for c in uid)


def _conforms(elem, deid: DataSet, action: ActionCode) -> bool:
    after = deid.get(elem.tag)
    if action is ActionCode.X:
        return after is None
    if action is ActionCode.Z:
        return after is not None and len(after.raw) == 0 and not after.items
    if action is ActionCode.D:
        return after is not None and after.raw != elem.raw
    if action is ActionCode.U:
        return after is not None and after.raw != elem.raw and _valid_uid(after.decode_text())
    if action is ActionCode.K:
        return after is not None and after.raw == elem.raw and len(after.items) == len(elem.items)
    if action is ActionCode.C:
        return after is not None
    return False
