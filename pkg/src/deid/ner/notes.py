"""Template-based synthetic admission notes with gold entity spans.

Deterministic slot filling over the shipped lexicons: every injected value is
recorded with its exact character range, so the corpus doubles as NER ground
truth.
"""

from __future__ import annotations

import random
from datetime import date, timedelta

from .labels import EntityLabel, EntitySpan, LabeledNote
from .lexicon import Lexicons, default_lexicons

_COMPLAINTS = (
    "shortness of breath", "chest pain", "acute abdominal pain", "syncope",
    "worsening lower extremity edema", "productive cough and fever",
    "intractable nausea", "new onset confusion", "melena", "dysuria",
)
_CONDITIONS = (
    "hypertension", "type 2 diabetes mellitus", "hyperlipidemia", "asthma",
    "chronic kidney disease stage 3", "atrial fibrillation", "osteoarthritis",
    "gastroesophageal reflux", "hypothyroidism", "coronary artery disease",
)
_MEDS = (
    "lisinopril 10 mg daily", "metformin 500 mg twice daily",
    "atorvastatin 40 mg nightly", "albuterol inhaler as needed",
    "levothyroxine 75 mcg daily", "omeprazole 20 mg daily",
    "apixaban 5 mg twice daily", "furosemide 20 mg daily",
)
_ALLERGIES = ("No known drug allergies", "Penicillin (rash)", "Sulfa drugs (hives)", "Latex")
_TEAMS = ("Internal Medicine", "Cardiology", "Pulmonology", "General Surgery", "Neurology")
_FINDINGS = (
    "no acute cardiopulmonary process", "right lower lobe consolidation",
    "mild cardiomegaly", "small pleural effusion", "no focal abnormality",
)


class _NoteBuilder:
    def __init__(self):
        self.parts: list[str] = []
        self.length = 0
        self.spans: list[EntitySpan] = []

    def add(self, text: str) -> None:
        self.parts.append(text)
        self.length += len(text)

    def ent(self, label: EntityLabel, value: str) -> None:
        self.spans.append(EntitySpan(label, self.length, self.length + len(value)))
        self.add(value)

    def line(self) -> None:
        self.add("\n")

    def build(self, seed: int) -> LabeledNote:
        return LabeledNote("".join(self.parts), tuple(self.spans), seed)


def _fmt_date(rng: random.Random, d: date) -> str:
    style = rng.randrange(3)
    if style == 0:
        return d.strftime("%m/%d/%Y")
    if style == 1:
        return d.strftime("%Y-%m-%d")
    return f"{d.strftime('%B')} {d.day}, {d.year}"


def _rand_date(rng: random.Random, start_year: int = 2018, end_year: int = 2024) -> date:
    start = date(start_year, 1, 1)
    days = (date(end_year, 12, 31) - start).days
    return start + timedelta(days=rng.randrange(days))


def _phone(rng: random.Random) -> str:
    if rng.random() < 0.5:
        return f"({rng.randint(200, 989)}) {rng.randint(200, 989)}-{rng.randint(1000, 9999)}"
    return f"{rng.randint(200, 989)}-{rng.randint(200, 989)}-{rng.randint(1000, 9999)}"


def _person(rng: random.Random, lex: Lexicons) -> str:
    return f"{rng.choice(lex.first_names)} {rng.choice(lex.last_names)}"


def generate_note(seed: int, lexicons: Lexicons | None = None) -> LabeledNote:
    """Build one admission note; identical output for identical seed."""
    lex = lexicons or default_lexicons()
    rng = random.Random(seed)
    b = _NoteBuilder()

    patient = _person(rng, lex)
    first_name = patient.split()[0]
    age = rng.randint(19, 94)
    sex = rng.choice(("male", "female"))
    hospital = rng.choice(lex.hospitals)
    complaint = rng.choice(_COMPLAINTS)

    b.add("Record Date: ")
    b.ent(EntityLabel.DATE, _fmt_date(rng, _rand_date(rng, 2022, 2024)))
    b.line()
    b.add(f"Admission Team: {rng.choice(_TEAMS)}, ")
    b.ent(EntityLabel.HOSPITAL, hospital)
    b.line()
    b.line()

    b.add("Patient Information\n")
    b.add("Name: ")
    b.ent(EntityLabel.PATIENT, patient)
    b.line()
    b.add("MRN: ")
    b.ent(EntityLabel.ID, str(rng.randint(1000000, 9999999)))
    b.line()
    birth_year = 2024 - age
    b.add("Date of Birth: ")
    b.ent(EntityLabel.DATE, _fmt_date(rng, _rand_date(rng, birth_year, birth_year)))
    b.line()
    b.add("Age: ")
    b.ent(EntityLabel.AGE, str(age))
    b.line()
    b.add(f"Sex: {sex}\n")
    b.add("Address: ")
    b.ent(EntityLabel.LOCATION, f"{rng.randint(10, 9999)} {rng.choice(lex.streets)}")
    b.add(", ")
    b.ent(EntityLabel.LOCATION, rng.choice(lex.cities))
    b.line()
    b.add("Phone: ")
    b.ent(EntityLabel.PHONE, _phone(rng))
    b.line()
    if rng.random() < 0.7:
        user = f"{first_name.lower()}.{patient.split()[1].lower()}{rng.randint(1, 99)}"
        b.add("Email: ")
        b.ent(EntityLabel.EMAIL, f"{user}@{rng.choice(('mailhub.com', 'postbox.net', 'lettermail.org'))}")
        b.line()
    if rng.random() < 0.6:
        b.add("Employer: ")
        b.ent(EntityLabel.PATORG, rng.choice(lex.organizations))
        b.line()
    if rng.random() < 0.5:
        b.add("SSN: ")
        b.ent(EntityLabel.OTHERPHI, f"{rng.randint(100, 899)}-{rng.randint(10, 99)}-{rng.randint(1000, 9999)}")
        b.line()

    b.add("Primary Care Physician: Dr. ")
    b.ent(EntityLabel.STAFF, _person(rng, lex))
    b.line()
    b.line()

    b.add(f"CC / RFA: {complaint}")
    if rng.random() < 0.4:
        b.add(", reported by ")
        b.ent(EntityLabel.PATIENT, first_name)
    b.line()
    b.line()

    b.add("HPI: Patient is a ")
    b.ent(EntityLabel.AGE, str(age))
    b.add(f"-year-old {sex} presenting with {complaint}. ")
    b.add("First evaluated at ")
    b.ent(EntityLabel.HOSPITAL, hospital)
    b.add(" on ")
    b.ent(EntityLabel.DATE, _fmt_date(rng, _rand_date(rng, 2022, 2024)))
    b.add(". Referred by Dr. ")
    b.ent(EntityLabel.STAFF, _person(rng, lex))
    b.add(".")
    b.line()
    b.line()

    b.add("PMHx:\n")
    for cond in rng.sample(_CONDITIONS, rng.randint(2, 4)):
        b.add(f"- {cond}\n")
    b.add(f"\nAllergies: {rng.choice(_ALLERGIES)}\n\n")
    b.add("Medications:\n")
    for med in rng.sample(_MEDS, rng.randint(2, 4)):
        b.add(f"- {med}\n")
    b.line()

    b.add("SHx: Lives in ")
    b.ent(EntityLabel.LOCATION, rng.choice(lex.cities))
    b.add(".")
    if rng.random() < 0.6:
        b.add(" Employed at ")
        b.ent(EntityLabel.PATORG, rng.choice(lex.organizations))
        b.add(".")
    b.add(f" {rng.choice(('Former smoker', 'Never smoker', 'Occasional alcohol use'))}.\n\n")

    b.add(f"FHx: {rng.choice(('Noncontributory', 'Father with coronary artery disease', 'Mother with type 2 diabetes'))}\n\n")

    b.add("Physical Exam:\n")
    b.add(f"BP {rng.randint(95, 178)}/{rng.randint(55, 104)}, HR {rng.randint(52, 118)}, ")
    b.add(f"RR {rng.randint(12, 26)}, Temp {rng.uniform(36.2, 39.4):.1f} C, SpO2 {rng.randint(88, 100)}%\n")
    b.add(f"General: {rng.choice(('alert and oriented', 'mildly distressed', 'comfortable'))}\n\n")

    b.add("Laboratory Results:\n")
    b.add(f"  WBC   {rng.uniform(3.5, 14.0):5.1f}  K/uL\n")
    b.add(f"  Hgb   {rng.uniform(8.0, 17.0):5.1f}  g/dL\n")
    b.add(f"  Cr    {rng.uniform(0.5, 2.8):5.2f}  mg/dL\n")
    b.add(f"  Na    {rng.randint(128, 146):5d}  mmol/L\n\n")

    b.add("Imaging Studies: Chest radiograph at ")
    b.ent(EntityLabel.HOSPITAL, rng.choice(lex.hospitals))
    b.add(" on ")
    b.ent(EntityLabel.DATE, _fmt_date(rng, _rand_date(rng, 2022, 2024)))
    b.add(f" showed {rng.choice(_FINDINGS)}.\n\n")

    b.add(f"EKG: {rng.choice(('normal sinus rhythm', 'sinus tachycardia', 'atrial fibrillation, rate controlled'))}\n\n")

    b.add("A/P: Admit for management of ")
    b.add(complaint)
    b.add(". Follow up on ")
    b.ent(EntityLabel.DATE, _fmt_date(rng, _rand_date(rng, 2024, 2025)))
    b.add(" with Dr. ")
    b.ent(EntityLabel.STAFF, _person(rng, lex))
    b.add(". Clinic contact: ")
    b.ent(EntityLabel.PHONE, _phone(rng))
    b.add(". Case ")
    b.ent(EntityLabel.ID, f"CS{rng.randint(100000, 999999)}")
    b.add(".")
    b.line()

    return b.build(seed)
