"""DICOM Part 10 reading and writing.

Supports Explicit and Implicit VR Little Endian with recursive sequences.
Compressed transfer syntaxes are rejected with a typed error; pixel access
covers uncompressed 8/16-bit grayscale frames.
"""

from .elements import (
    CompressedPixelDataUnsupported,
    DataElement,
    DataSet,
    DicomError,
    GeometryMismatch,
    MissingMagic,
    OddValueLength,
    PixelBuffer,
    TruncatedElement,
    UnsupportedFeature,
    UnsupportedTransferSyntax,
)
from .parser import parse_file
from .pixels import get_pixels, set_pixels
from .tags import (
    EXPLICIT_VR_LE,
    IMPLICIT_VR_LE,
    Tag,
    keyword_for,
    tag_for_keyword,
    vr_for_tag,
)
from .writer import build_meta, serialize

__all__ = [
    "CompressedPixelDataUnsupported",
    "DataElement",
    "DataSet",
    "DicomError",
    "EXPLICIT_VR_LE",
    "GeometryMismatch",
    "IMPLICIT_VR_LE",
    "MissingMagic",
    "OddValueLength",
    "PixelBuffer",
    "Tag",
    "TruncatedElement",
    "UnsupportedFeature",
    "UnsupportedTransferSyntax",
    "build_meta",
    "get_pixels",
    "keyword_for",
    "parse_file",
    "serialize",
    "set_pixels",
    "tag_for_keyword",
    "vr_for_tag",
]
