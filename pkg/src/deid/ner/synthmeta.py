"""Synthetic DICOM metadata with known PHI injections.

Each generated dataset follows a per-modality tag template and returns the
ground-truth list of (tag, label, value) injections used for evaluation.
PatientID is an injective function of the seed, so no two seeds collide on
the (PatientName, PatientID) pair.
"""

from __future__ import annotations

import random
from datetime import date, timedelta

from ..dicomio import DataSet, Tag
from ..dicomio.elements import DataElement, element_from_numbers, element_from_text
from .labels import EntityLabel
from .lexicon import Lexicons, default_lexicons

UID_ROOT = "1.2.826.0.1.3680043.8888."

_SOP_CLASSES = {
    "CT": "1.2.840.10008.5.1.4.1.1.2",
    "MR": "1.2.840.10008.5.1.4.1.1.4",
    "CR": "1.2.840.10008.5.1.4.1.1.1",
}

_STUDY_DESCRIPTIONS = {
    "CT": ("CT chest abdomen pelvis", "CT head without contrast", "CT angiogram chest"),
    "MR": ("MR brain with and without contrast", "MR lumbar spine", "MR knee right"),
    "CR": ("Chest radiograph PA and lateral", "Abdominal radiograph", "Left wrist series"),
}

_SERIES_DESCRIPTIONS = {
    "CT": ("AXIAL 5mm", "CORONAL REFORMAT", "LUNG WINDOW"),
    "MR": ("T1 SAG", "T2 AXIAL FLAIR", "DWI"),
    "CR": ("PA VIEW", "LATERAL VIEW", "AP SUPINE"),
}


def _pid_for_seed(seed: int) -> str:
    return f"PT{(seed * 2654435761) % (1 << 32):010d}"


def _da(rng: random.Random, start_year: int, end_year: int) -> str:
    start = date(start_year, 1, 1)
    days = (date(end_year, 12, 31) - start).days
    return (start + timedelta(days=rng.randrange(days + 1))).strftime("%Y%m%d")


def generate_metadata(
    seed: int,
    lexicons: Lexicons | None = None,
    study_uid: str | None = None,
    series_uid: str | None = None,
    modality: str | None = None,
) -> tuple[DataSet, list[tuple[Tag, EntityLabel, str]]]:
    """Build one metadata-only dataset plus its PHI ground truth."""
    lex = lexicons or default_lexicons()
    rng = random.Random(("meta", seed).__repr__())
    modality = modality or ("CT", "MR", "CR")[seed % 3]

    truth: list[tuple[Tag, EntityLabel, str]] = []
    ds = DataSet()

    def text(group: int, element: int, vr: str, value: str,
             label: EntityLabel | None = None, phi: str | None = None):
        # `phi` narrows the ground-truth record to the identifying substring
        # when the element value mixes PHI with technical content.
        t = Tag(group, element)
        ds.elements[t] = element_from_text(t, vr, value, codec="latin-1")
        if label is not None:
            truth.append((t, label, phi if phi is not None else value))

    first = rng.choice(lex.first_names)
    last = rng.choice(lex.last_names)
    patient_name = f"{last}^{first}"
    pid = _pid_for_seed(seed)
    age = rng.randint(19, 94)
    birth = _da(rng, 2024 - age, 2024 - age)
    study_date = _da(rng, 2021, 2024)
    hospital = rng.choice(lex.hospitals)
    referring = f"{rng.choice(lex.last_names)}^{rng.choice(lex.first_names)}"
    operator = f"{rng.choice(lex.last_names)}^{rng.choice(lex.first_names)}"
    phone = f"{rng.randint(200, 989)}-{rng.randint(200, 989)}-{rng.randint(1000, 9999)}"
    email = f"{first.lower()}.{last.lower()}{rng.randint(1, 99)}@mailhub.com"
    street = f"{rng.randint(10, 9999)} {rng.choice(lex.streets)}"
    city = rng.choice(lex.cities)
    accession = f"ACC{rng.randint(1000000, 9999999)}"
    policy = f"POL-{rng.randint(100000, 999999)}"
    org = rng.choice(lex.organizations)

    study_uid = study_uid or f"{UID_ROOT}1.{seed}"
    series_uid = series_uid or f"{UID_ROOT}2.{seed}"
    sop_uid = f"{UID_ROOT}3.{seed}"
    frame_uid = f"{UID_ROOT}4.{seed}"

    text(0x0008, 0x0005, "CS", "ISO_IR 100")
    text(0x0008, 0x0008, "CS", "ORIGINAL\\PRIMARY")
    text(0x0008, 0x0016, "UI", _SOP_CLASSES[modality])
    text(0x0008, 0x0018, "UI", sop_uid)
    text(0x0008, 0x0020, "DA", study_date, EntityLabel.DATE)
    text(0x0008, 0x0021, "DA", study_date)
    text(0x0008, 0x0030, "TM", f"{rng.randint(6, 19):02d}{rng.randint(0, 59):02d}00")
    text(0x0008, 0x0050, "SH", accession, EntityLabel.ID)
    text(0x0008, 0x0060, "CS", modality)
    text(0x0008, 0x0070, "LO", "SynthImaging Systems")
    text(0x0008, 0x0080, "LO", hospital, EntityLabel.HOSPITAL)
    text(0x0008, 0x0081, "ST", f"{street}, {city}", EntityLabel.LOCATION)
    text(0x0008, 0x0090, "PN", referring, EntityLabel.STAFF)
    text(0x0008, 0x1030, "LO",
         f"{rng.choice(_STUDY_DESCRIPTIONS[modality])} for {first} {last}",
         EntityLabel.PATIENT, phi=f"{first} {last}")
    text(0x0008, 0x103E, "LO", rng.choice(_SERIES_DESCRIPTIONS[modality]))
    text(0x0008, 0x1070, "PN", operator, EntityLabel.STAFF)
    text(0x0008, 0x1090, "LO", f"Scanner {modality}-{rng.randint(100, 999)}")
    text(0x0010, 0x0010, "PN", patient_name, EntityLabel.PATIENT)
    text(0x0010, 0x0020, "LO", pid, EntityLabel.ID)
    text(0x0010, 0x0030, "DA", birth, EntityLabel.DATE)
    text(0x0010, 0x0040, "CS", rng.choice(("M", "F"))),
    text(0x0010, 0x1010, "AS", f"{age:03d}Y", EntityLabel.AGE)
    text(0x0010, 0x1040, "LO", f"{street}, {city}", EntityLabel.LOCATION)
    text(0x0010, 0x2154, "SH", phone, EntityLabel.PHONE)
    text(0x0010, 0x21B0, "LT", f"Employed at {org}. History of hypertension.",
         EntityLabel.PATORG, phi=org)
    text(0x0010, 0x4000, "LT", f"Contact {email} or {phone}", EntityLabel.EMAIL, phi=email)
    text(0x0018, 0x0015, "CS", {"CT": "CHEST", "MR": "BRAIN", "CR": "CHEST"}[modality])
    if modality == "CT":
        text(0x0018, 0x0060, "DS", str(rng.choice((100, 120, 140))))
        text(0x0018, 0x0050, "DS", f"{rng.choice((1.0, 2.5, 5.0)):.1f}")
    text(0x0018, 0x1030, "LO", f"{modality} ROUTINE PROTOCOL")
    text(0x0020, 0x000D, "UI", study_uid)
    text(0x0020, 0x000E, "UI", series_uid)
    text(0x0020, 0x0010, "SH", f"SID{rng.randint(1000, 9999)}")
    text(0x0020, 0x0011, "IS", str(rng.randint(1, 9)))
    text(0x0020, 0x0013, "IS", str(rng.randint(1, 200)))
    text(0x0020, 0x0052, "UI", frame_uid)

    # Private group with an injected identifier; exercises the private-tag rule.
    text(0x0009, 0x0010, "LO", "SYNTH PRIVATE")
    text(0x0009, 0x1001, "LO", f"Policy {policy}", EntityLabel.OTHERPHI, phi=policy)

    # Nested sequence carrying inferred PHI; exercises recursive actions.
    item = DataSet()
    step_desc = f"{modality} SCHEDULED - {first} {last}"
    item.elements[Tag(0x0040, 0x0007)] = element_from_text(Tag(0x0040, 0x0007), "LO", step_desc)
    item.elements[Tag(0x0040, 0x0009)] = element_from_text(Tag(0x0040, 0x0009), "SH", f"SPS{rng.randint(1000, 9999)}")
    ds.elements[Tag(0x0040, 0x0275)] = DataElement(Tag(0x0040, 0x0275), "SQ", b"", (item,))
    truth.append((Tag(0x0040, 0x0275), EntityLabel.PATIENT, f"{first} {last}"))

    return ds, truth
