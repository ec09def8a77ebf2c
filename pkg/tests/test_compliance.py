"""Compliance rule battery over original/de-identified pairs."""

import numpy as np
import pytest

from deid.detector import BBox
from deid.evals import burn_readable, compliance_check, load_rules
from deid.metadeid import (
    DateShiftPolicy,
    DeidContext,
    UidMap,
    apply_recipe,
    default_recipe,
    lexicon_from_terms,
)
from deid.ner import ReferenceDetector, default_lexicons, generate_metadata
from deid.synth import burn_text, phantom


def make_pair(seed=0):
    ds, truth = generate_metadata(seed)
    lexicon = lexicon_from_terms(default_lexicons())
    ctx = DeidContext(uid_map=UidMap(), date_shift=DateShiftPolicy(),
                      lexicon=lexicon, detectors=[ReferenceDetector()],
                      file_id=str(seed))
    out, _ = apply_recipe(ds, default_recipe(), ctx)
    return ds, out, truth, lexicon


def test_untouched_file_fails_removal_rules():
    ds, _out, truth, lexicon = make_pair(1)
    report = compliance_check(ds, ds, truth, default_recipe(), lexicon=lexicon)
    hipaa = [r for r in report.rows if r.category == "hipaa"]
    assert sum(r.fail for r in hipaa) > 0
    # every injected identifier class it covers fails on the untouched file
    for row in hipaa:
        if row.total:
            assert row.fail == row.total


def test_processed_file_passes_all_rules():
    ds, out, truth, lexicon = make_pair(2)
    report = compliance_check(ds, out, truth, default_recipe(), lexicon=lexicon)
    assert report.total_fail == 0, report.format_table()
    assert report.total_rate == pytest.approx(1.0)


def test_report_percentage_formatting():
    ds, out, truth, lexicon = make_pair(3)
    report = compliance_check(ds, out, truth, default_recipe(), lexicon=lexicon)
    table = report.format_table()
    assert "Total" in table
    assert "(1.0000)" in table
    doc = report.to_dict()
    assert doc["total"]["rate"] == pytest.approx(
        doc["total"]["pass"] / (doc["total"]["pass"] + doc["total"]["fail"]))


def test_rules_load_as_data():
    rules = load_rules()
    ids = {r["id"] for r in rules}
    assert {"DICOM-IOD-1", "HIPAA-A", "TCIA-PIX", "DICOM-P15-BASIC-U"} <= ids
    for rule in rules:
        assert rule["category"] in ("dicom", "hipaa", "tcia")


def test_burn_readable_oracle(rng):
    frame = phantom("CT", 128, 128, rng)
    burned, box = burn_text(frame, "JOHN", (30, 30), scale=2, style="block",
                            intensity=3900)
    untouched = burned.copy()
    assert burn_readable(burned, untouched, box)

    redacted = burned.copy()
    redacted[int(box.y0):int(box.y1), int(box.x0):int(box.x1)] = 0
    assert not burn_readable(burned, redacted, box)

    # partial survival below the cut counts as unreadable
    partial = burned.copy()
    mid_x = int((box.x0 + box.x1) / 2)
    partial[int(box.y0):int(box.y1), int(box.x0):mid_x] = 0
    survived = burn_readable(burned, partial, box, survival_cut=0.9)
    assert not survived
