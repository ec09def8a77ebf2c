"""Data elements, datasets and pixel buffers plus the typed error family."""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .tags import BINARY_VRS, EXPLICIT_VR_LE, STRING_VRS, Tag, vr_for_tag


class DicomError(Exception):
    """Base class for every DICOM I/O failure."""


class MissingMagic(DicomError):
    pass


class TruncatedElement(DicomError):
    def __init__(self, tag: Optional[Tag], detail: str = ""):
        self.tag = tag
        where = str(tag) if tag is not None else "<stream>"
        super().__init__(f"truncated element at {where}{': ' + detail if detail else ''}")


class UnsupportedTransferSyntax(DicomError):
    def __init__(self, uid: str):
        self.uid = uid
        super().__init__(f"unsupported transfer syntax {uid!r}")


class UnsupportedFeature(DicomError):
    pass


class OddValueLength(DicomError):
    def __init__(self, tag: Tag, length: int):
        self.tag = tag
        super().__init__(f"element {tag} has odd value length {length}")


class CompressedPixelDataUnsupported(DicomError):
    pass


class GeometryMismatch(DicomError):
    pass


_CHARSETS = {
    "": "ascii",
    "ISO_IR 6": "ascii",
    "ISO_IR 100": "latin-1",
    "ISO_IR 192": "utf-8",
}


def codec_for_charset(specific_character_set: str) -> str:
    name = specific_character_set.strip()
    if name in _CHARSETS:
        return _CHARSETS[name]
    raise UnsupportedFeature(f"unsupported SpecificCharacterSet {name!r}")


@dataclass(frozen=True)
class DataElement:
    """One tagged value. `raw` is authoritative; decoding is a view.

    Sequence (SQ) elements keep their parsed item datasets in `items` and an
    `undefined_length` flag so the original length encoding round-trips.
    """

    tag: Tag
    vr: str
    raw: bytes = b""
    items: tuple["DataSet", ...] = ()
    undefined_length: bool = False

    def decode_text(self, codec: str = "ascii") -> str:
        """Decoded string view for string VRs (trailing padding stripped)."""
        if self.vr == "UI":
            return self.raw.rstrip(b"\x00").decode("ascii")
        if self.vr in STRING_VRS:
            return self.raw.decode(codec, errors="replace").rstrip(" ")
        raise UnsupportedFeature(f"VR {self.vr} has no text view")

    def decode_numbers(self) -> tuple:
        """Decoded numeric view for fixed-width binary VRs."""
        if self.vr not in BINARY_VRS:
            raise UnsupportedFeature(f"VR {self.vr} has no numeric view")
        fmt, width = BINARY_VRS[self.vr]
        if len(self.raw) % width != 0:
            raise GeometryMismatch(f"{self.tag}: raw length {len(self.raw)} not a multiple of {width}")
        count = len(self.raw) // width
        out = []
        for i in range(count):
            vals = struct.unpack_from(fmt, self.raw, i * width)
            out.append(vals if self.vr == "AT" else vals[0])
        return tuple(out)

    def first_number(self):
        nums = self.decode_numbers()
        return nums[0] if nums else None


def element_from_text(tag: Tag, vr: str, text: str, codec: str = "ascii") -> DataElement:
    """Encode a string value with DICOM even-length padding."""
    if vr == "UI":
        raw = text.encode("ascii")
        if len(raw) % 2:
            raw += b"\x00"
    elif vr in STRING_VRS:
        raw = text.encode(codec)
        if len(raw) % 2:
            raw += b" "
    else:
        raise UnsupportedFeature(f"VR {vr} is not a string VR")
    return DataElement(tag, vr, raw)


def element_from_numbers(tag: Tag, vr: str, values: Sequence) -> DataElement:
    fmt, _width = BINARY_VRS[vr]
    parts = []
    for v in values:
        if vr == "AT":
            parts.append(struct.pack(fmt, v[0], v[1]))
        else:
            parts.append(struct.pack(fmt, v))
    return DataElement(tag, vr, b"".join(parts))


def element_value(elem: DataElement, codec: str = "ascii") -> Union[str, tuple, bytes, tuple["DataSet", ...]]:
    """Best-effort decoded view used by rendering and audit paths."""
    if elem.vr == "SQ":
        return elem.items
    if elem.vr == "UI" or elem.vr in STRING_VRS:
        return elem.decode_text(codec)
    if elem.vr in BINARY_VRS:
        return elem.decode_numbers()
    return elem.raw


@dataclass
class DataSet:
    """Parsed DICOM object: file-meta group plus the main element map.

    Elements iterate in strictly increasing tag order regardless of the
    insertion order. Instances are treated as immutable once built; mutating
    helpers return copies.
    """

    transfer_syntax: str = EXPLICIT_VR_LE
    meta: dict[Tag, DataElement] = field(default_factory=dict)
    elements: dict[Tag, DataElement] = field(default_factory=dict)
    undefined_item_length: bool = False  # only meaningful for SQ items

    def __contains__(self, t: Tag) -> bool:
        return t in self.elements

    def __getitem__(self, t: Tag) -> DataElement:
        return self.elements[t]

    def get(self, t: Tag, default=None) -> Optional[DataElement]:
        return self.elements.get(t, default)

    def iter_elements(self) -> Iterator[DataElement]:
        for t in sorted(self.elements):
            yield self.elements[t]

    def iter_meta(self) -> Iterator[DataElement]:
        for t in sorted(self.meta):
            yield self.meta[t]

    def codec(self) -> str:
        elem = self.elements.get(Tag(0x0008, 0x0005))
        if elem is None:
            return "ascii"
        return codec_for_charset(elem.decode_text())

    def text(self, t: Tag, default: str = "") -> str:
        elem = self.elements.get(t)
        if elem is None:
            return default
        return elem.decode_text(self.codec())

    def number(self, t: Tag, default=None):
        elem = self.elements.get(t)
        if elem is None:
            return default
        return elem.first_number()

    def with_element(self, elem: DataElement) -> "DataSet":
        new = dict(self.elements)
        new[elem.tag] = elem
        return DataSet(self.transfer_syntax, dict(self.meta), new, self.undefined_item_length)

    def without_element(self, t: Tag) -> "DataSet":
        new = dict(self.elements)
        new.pop(t, None)
        return DataSet(self.transfer_syntax, dict(self.meta), new, self.undefined_item_length)

    def structurally_equal(self, other: "DataSet") -> bool:
        if self.transfer_syntax != other.transfer_syntax:
            return False
        if sorted(self.meta) != sorted(other.meta) or sorted(self.elements) != sorted(other.elements):
            return False
        for t in self.meta:
            if self.meta[t] != other.meta[t]:
                return False
        for t in self.elements:
            if not _elements_equal(self.elements[t], other.elements[t]):
                return False
        return True


def _elements_equal(a: DataElement, b: DataElement) -> bool:
    if (a.tag, a.vr, a.raw, a.undefined_length) != (b.tag, b.vr, b.raw, b.undefined_length):
        return False
    if len(a.items) != len(b.items):
        return False
    return all(x.structurally_equal(y) for x, y in zip(a.items, b.items))


@dataclass
class PixelBuffer:
    """Decoded grayscale frames: (frames, rows, cols) uint8 or uint16."""

    rows: int
    cols: int
    bits_allocated: int
    photometric: str
    frames: np.ndarray
    samples_per_pixel: int = 1

    def __post_init__(self):
        if self.bits_allocated not in (8, 16):
            raise CompressedPixelDataUnsupported(
                f"bits_allocated={self.bits_allocated} outside supported {{8, 16}}"
            )
        if self.samples_per_pixel != 1:
            raise CompressedPixelDataUnsupported("only single-sample grayscale supported")
        if self.photometric not in ("MONOCHROME1", "MONOCHROME2"):
            raise CompressedPixelDataUnsupported(f"photometric {self.photometric!r} unsupported")
        expected = (np.uint8 if self.bits_allocated == 8 else np.uint16)
        if self.frames.dtype != expected:
            raise GeometryMismatch(f"frame dtype {self.frames.dtype} != {np.dtype(expected)}")
        if self.frames.ndim != 3 or self.frames.shape[1:] != (self.rows, self.cols):
            raise GeometryMismatch(
                f"frames shape {self.frames.shape} inconsistent with {self.rows}x{self.cols}"
            )

    @property
    def n_frames(self) -> int:
        return int(self.frames.shape[0])

    @property
    def max_value(self) -> int:
        return (1 << self.bits_allocated) - 1
