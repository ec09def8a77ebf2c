"""Tags, VR classification tables and the built-in data dictionary."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Tag:
    """A (group, element) pair; ordering is lexicographic."""

    group: int
    element: int

    def __post_init__(self):
        if not (0 <= self.group <= 0xFFFF and 0 <= self.element <= 0xFFFF):
            raise ValueError(f"tag out of range: {self.group:#x},{self.element:#x}")

    @property
    def is_private(self) -> bool:
        return self.group % 2 == 1

    def __str__(self) -> str:
        return f"({self.group:04X},{self.element:04X})"


def tag(group: int, element: int) -> Tag:
    return Tag(group, element)


# Well-known transfer syntaxes (the only two supported).
IMPLICIT_VR_LE = "1.2.840.10008.1.2"
EXPLICIT_VR_LE = "1.2.840.10008.1.2.1"

# VRs that use the 12-byte explicit header (2 reserved + 4-byte length).
LONG_HEADER_VRS = frozenset(
    {"OB", "OD", "OF", "OL", "OW", "SQ", "UC", "UN", "UR", "UT"}
)

# Text VRs padded with trailing space; UI is padded with NUL instead.
STRING_VRS = frozenset(
    {"AE", "AS", "CS", "DA", "DS", "DT", "IS", "LO", "LT", "PN", "SH", "ST",
     "TM", "UC", "UR", "UT"}
)

# Fixed-width binary VRs with their struct codes.
BINARY_VRS = {
    "US": ("<H", 2),
    "UL": ("<I", 4),
    "SS": ("<h", 2),
    "SL": ("<i", 4),
    "FL": ("<f", 4),
    "FD": ("<d", 8),
    "AT": ("<HH", 4),
}

ITEM_TAG = Tag(0xFFFE, 0xE000)
ITEM_DELIM_TAG = Tag(0xFFFE, 0xE00D)
SEQ_DELIM_TAG = Tag(0xFFFE, 0xE0DD)
UNDEFINED_LENGTH = 0xFFFFFFFF

# Compact data dictionary: keyword and VR for the tags this pipeline
# generates, inspects or ships recipes for. Unknown tags fall back to UN.
_DICT: dict[Tag, tuple[str, str]] = {
    Tag(0x0002, 0x0000): ("FileMetaInformationGroupLength", "UL"),
    Tag(0x0002, 0x0001): ("FileMetaInformationVersion", "OB"),
    Tag(0x0002, 0x0002): ("MediaStorageSOPClassUID", "UI"),
    Tag(0x0002, 0x0003): ("MediaStorageSOPInstanceUID", "UI"),
    Tag(0x0002, 0x0010): ("TransferSyntaxUID", "UI"),
    Tag(0x0002, 0x0012): ("ImplementationClassUID", "UI"),
    Tag(0x0002, 0x0013): ("ImplementationVersionName", "SH"),
    Tag(0x0008, 0x0005): ("SpecificCharacterSet", "CS"),
    Tag(0x0008, 0x0008): ("ImageType", "CS"),
    Tag(0x0008, 0x0016): ("SOPClassUID", "UI"),
    Tag(0x0008, 0x0018): ("SOPInstanceUID", "UI"),
    Tag(0x0008, 0x0020): ("StudyDate", "DA"),
    Tag(0x0008, 0x0021): ("SeriesDate", "DA"),
    Tag(0x0008, 0x0022): ("AcquisitionDate", "DA"),
    Tag(0x0008, 0x0023): ("ContentDate", "DA"),
    Tag(0x0008, 0x0030): ("StudyTime", "TM"),
    Tag(0x0008, 0x0031): ("SeriesTime", "TM"),
    Tag(0x0008, 0x0032): ("AcquisitionTime", "TM"),
    Tag(0x0008, 0x0033): ("ContentTime", "TM"),
    Tag(0x0008, 0x0050): ("AccessionNumber", "SH"),
    Tag(0x0008, 0x0060): ("Modality", "CS"),
    Tag(0x0008, 0x0070): ("Manufacturer", "LO"),
    Tag(0x0008, 0x0080): ("InstitutionName", "LO"),
    Tag(0x0008, 0x0081): ("InstitutionAddress", "ST"),
    Tag(0x0008, 0x0090): ("ReferringPhysicianName", "PN"),
    Tag(0x0008, 0x0094): ("ReferringPhysicianTelephoneNumbers", "SH"),
    Tag(0x0008, 0x1030): ("StudyDescription", "LO"),
    Tag(0x0008, 0x103E): ("SeriesDescription", "LO"),
    Tag(0x0008, 0x1040): ("InstitutionalDepartmentName", "LO"),
    Tag(0x0008, 0x1048): ("PhysiciansOfRecord", "PN"),
    Tag(0x0008, 0x1050): ("PerformingPhysicianName", "PN"),
    Tag(0x0008, 0x1070): ("OperatorsName", "PN"),
    Tag(0x0008, 0x1090): ("ManufacturerModelName", "LO"),
    Tag(0x0008, 0x1110): ("ReferencedStudySequence", "SQ"),
    Tag(0x0008, 0x1150): ("ReferencedSOPClassUID", "UI"),
    Tag(0x0008, 0x1155): ("ReferencedSOPInstanceUID", "UI"),
    Tag(0x0010, 0x0010): ("PatientName", "PN"),
    Tag(0x0010, 0x0020): ("PatientID", "LO"),
    Tag(0x0010, 0x0030): ("PatientBirthDate", "DA"),
    Tag(0x0010, 0x0040): ("PatientSex", "CS"),
    Tag(0x0010, 0x1000): ("OtherPatientIDs", "LO"),
    Tag(0x0010, 0x1010): ("PatientAge", "AS"),
    Tag(0x0010, 0x1020): ("PatientSize", "DS"),
    Tag(0x0010, 0x1030): ("PatientWeight", "DS"),
    Tag(0x0010, 0x1040): ("PatientAddress", "LO"),
    Tag(0x0010, 0x2154): ("PatientTelephoneNumbers", "SH"),
    Tag(0x0010, 0x21B0): ("AdditionalPatientHistory", "LT"),
    Tag(0x0010, 0x4000): ("PatientComments", "LT"),
    Tag(0x0018, 0x0015): ("BodyPartExamined", "CS"),
    Tag(0x0018, 0x0050): ("SliceThickness", "DS"),
    Tag(0x0018, 0x0060): ("KVP", "DS"),
    Tag(0x0018, 0x1030): ("ProtocolName", "LO"),
    Tag(0x0018, 0x1151): ("XRayTubeCurrent", "IS"),
    Tag(0x0018, 0x5100): ("PatientPosition", "CS"),
    Tag(0x0020, 0x000D): ("StudyInstanceUID", "UI"),
    Tag(0x0020, 0x000E): ("SeriesInstanceUID", "UI"),
    Tag(0x0020, 0x0010): ("StudyID", "SH"),
    Tag(0x0020, 0x0011): ("SeriesNumber", "IS"),
    Tag(0x0020, 0x0013): ("InstanceNumber", "IS"),
    Tag(0x0020, 0x0020): ("PatientOrientation", "CS"),
    Tag(0x0020, 0x0032): ("ImagePositionPatient", "DS"),
    Tag(0x0020, 0x0037): ("ImageOrientationPatient", "DS"),
    Tag(0x0020, 0x0052): ("FrameOfReferenceUID", "UI"),
    Tag(0x0020, 0x1041): ("SliceLocation", "DS"),
    Tag(0x0028, 0x0002): ("SamplesPerPixel", "US"),
    Tag(0x0028, 0x0004): ("PhotometricInterpretation", "CS"),
    Tag(0x0028, 0x0008): ("NumberOfFrames", "IS"),
    Tag(0x0028, 0x0010): ("Rows", "US"),
    Tag(0x0028, 0x0011): ("Columns", "US"),
    Tag(0x0028, 0x0030): ("PixelSpacing", "DS"),
    Tag(0x0028, 0x0100): ("BitsAllocated", "US"),
    Tag(0x0028, 0x0101): ("BitsStored", "US"),
    Tag(0x0028, 0x0102): ("HighBit", "US"),
    Tag(0x0028, 0x0103): ("PixelRepresentation", "US"),
    Tag(0x0028, 0x0301): ("BurnedInAnnotation", "CS"),
    Tag(0x0028, 0x1050): ("WindowCenter", "DS"),
    Tag(0x0028, 0x1051): ("WindowWidth", "DS"),
    Tag(0x0032, 0x1032): ("RequestingPhysician", "PN"),
    Tag(0x0032, 0x1060): ("RequestedProcedureDescription", "LO"),
    Tag(0x0040, 0x0007): ("ScheduledProcedureStepDescription", "LO"),
    Tag(0x0040, 0x0009): ("ScheduledProcedureStepID", "SH"),
    Tag(0x0040, 0x0275): ("RequestAttributesSequence", "SQ"),
    Tag(0x0040, 0x1001): ("RequestedProcedureID", "SH"),
    Tag(0x0012, 0x0062): ("PatientIdentityRemoved", "CS"),
    Tag(0x0012, 0x0063): ("DeidentificationMethod", "LO"),
    Tag(0x7FE0, 0x0010): ("PixelData", "OW"),
}

_BY_KEYWORD = {kw: t for t, (kw, _vr) in _DICT.items()}


def vr_for_tag(t: Tag) -> str:
    """Dictionary VR for implicit-VR streams; UN when unknown."""
    entry = _DICT.get(t)
    if entry is not None:
        return entry[1]
    if t.element == 0x0000:
        return "UL"  # group length
    return "UN"


def keyword_for(t: Tag) -> str:
    entry = _DICT.get(t)
    if entry is not None:
        return entry[0]
    return f"Tag{t.group:04X}{t.element:04X}"


def tag_for_keyword(keyword: str) -> Tag:
    return _BY_KEYWORD[keyword]
