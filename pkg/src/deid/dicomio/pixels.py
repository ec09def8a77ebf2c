"""Pixel data access for uncompressed grayscale datasets."""

from __future__ import annotations

import numpy as np

from .elements import (
    CompressedPixelDataUnsupported,
    DataElement,
    DataSet,
    GeometryMismatch,
    PixelBuffer,
)
from .elements import element_from_numbers, element_from_text
from .tags import Tag

_ROWS = Tag(0x0028, 0x0010)
_COLS = Tag(0x0028, 0x0011)
_BITS = Tag(0x0028, 0x0100)
_SAMPLES = Tag(0x0028, 0x0002)
_PHOTO = Tag(0x0028, 0x0004)
_NFRAMES = Tag(0x0028, 0x0008)
_PIXELDATA = Tag(0x7FE0, 0x0010)


def get_pixels(ds: DataSet) -> PixelBuffer:
    """Decode (7FE0,0010) into a PixelBuffer; uncompressed syntaxes only."""
    for required in (_ROWS, _COLS, _BITS):
        if required not in ds:
            raise GeometryMismatch(f"missing {required} for pixel decoding")
    rows = int(ds.number(_ROWS))
    cols = int(ds.number(_COLS))
    bits = int(ds.number(_BITS))
    if bits not in (8, 16):
        raise CompressedPixelDataUnsupported(f"BitsAllocated={bits} unsupported")
    samples = int(ds.number(_SAMPLES, 1))
    if samples != 1:
        raise CompressedPixelDataUnsupported(f"SamplesPerPixel={samples} unsupported")
    photometric = ds.text(_PHOTO, "MONOCHROME2") or "MONOCHROME2"

    elem = ds.get(_PIXELDATA)
    if elem is None:
        raise GeometryMismatch("missing PixelData")
    if elem.undefined_length or elem.items:
        raise CompressedPixelDataUnsupported("encapsulated PixelData unsupported")

    n_frames = int(ds.text(_NFRAMES, "1") or "1")
    frame_bytes = rows * cols * (bits // 8)
    expected = frame_bytes * n_frames
    raw = elem.raw
    # A single padding byte is legal when the payload length is odd.
    if len(raw) not in (expected, expected + 1):
        raise GeometryMismatch(
            f"PixelData length {len(raw)} != rows*cols*bytes*frames = {expected}"
        )
    dtype = np.uint8 if bits == 8 else np.dtype("<u2")
    frames = np.frombuffer(raw[:expected], dtype=dtype).reshape(n_frames, rows, cols)
    return PixelBuffer(rows, cols, bits, photometric, frames.astype(frames.dtype.newbyteorder("=")))


def set_pixels(ds: DataSet, buf: PixelBuffer) -> DataSet:
    """Return a copy of `ds` with pixel geometry elements and PixelData set."""
    new = DataSet(ds.transfer_syntax, dict(ds.meta), dict(ds.elements))
    new.elements[_ROWS] = element_from_numbers(_ROWS, "US", [buf.rows])
    new.elements[_COLS] = element_from_numbers(_COLS, "US", [buf.cols])
    new.elements[_BITS] = element_from_numbers(_BITS, "US", [buf.bits_allocated])
    new.elements[Tag(0x0028, 0x0101)] = element_from_numbers(Tag(0x0028, 0x0101), "US", [buf.bits_allocated])
    new.elements[Tag(0x0028, 0x0102)] = element_from_numbers(Tag(0x0028, 0x0102), "US", [buf.bits_allocated - 1])
    new.elements[_SAMPLES] = element_from_numbers(_SAMPLES, "US", [1])
    new.elements[_PHOTO] = element_from_text(_PHOTO, "CS", buf.photometric)
    if buf.n_frames != 1 or _NFRAMES in new.elements:
        new.elements[_NFRAMES] = element_from_text(_NFRAMES, "IS", str(buf.n_frames))

    dtype = np.uint8 if buf.bits_allocated == 8 else np.dtype("<u2")
    raw = np.ascontiguousarray(buf.frames, dtype=dtype).tobytes()
    if len(raw) % 2:
        raw += b"\x00"
    vr = "OB" if buf.bits_allocated == 8 else "OW"
    new.elements[_PIXELDATA] = DataElement(_PIXELDATA, vr, raw)
    return new
