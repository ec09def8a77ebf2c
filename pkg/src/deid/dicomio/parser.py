"""DICOM Part 10 stream parsing."""

from __future__ import annotations

import struct
from typing import Optional

from .elements import (
    DataElement,
    DataSet,
    MissingMagic,
    TruncatedElement,
    UnsupportedFeature,
    UnsupportedTransferSyntax,
)
from .tags import (
    EXPLICIT_VR_LE,
    IMPLICIT_VR_LE,
    ITEM_DELIM_TAG,
    ITEM_TAG,
    LONG_HEADER_VRS,
    SEQ_DELIM_TAG,
    Tag,
    UNDEFINED_LENGTH,
    vr_for_tag,
)

_PREAMBLE_LEN = 128
_MAGIC = b"DICM"


class _Reader:
    """Bounded cursor over the input; never reads past its window."""

    __slots__ = ("data", "pos", "end")

    def __init__(self, data: bytes, pos: int, end: int):
        self.data = data
        self.pos = pos
        self.end = end

    def remaining(self) -> int:
        return self.end - self.pos

    def take(self, n: int, tag: Optional[Tag]) -> bytes:
        if self.pos + n > self.end:
            raise TruncatedElement(tag, f"needed {n} bytes, {self.end - self.pos} left")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def peek_tag(self) -> Tag:
        if self.pos + 4 > self.end:
            raise TruncatedElement(None, "tag header")
        group, element = struct.unpack_from("<HH", self.data, self.pos)
        return Tag(group, element)

    def sub(self, length: int, tag: Optional[Tag]) -> "_Reader":
        if self.pos + length > self.end:
            raise TruncatedElement(tag, f"declared length {length} exceeds stream")
        child = _Reader(self.data, self.pos, self.pos + length)
        self.pos += length
        return child


def _read_tag(r: _Reader) -> Tag:
    raw = r.take(4, None)
    group, element = struct.unpack("<HH", raw)
    return Tag(group, element)


def _read_element(r: _Reader, explicit: bool) -> DataElement:
    tag = _read_tag(r)
    if explicit:
        vr = r.take(2, tag).decode("ascii", errors="replace")
        if vr in LONG_HEADER_VRS:
            r.take(2, tag)  # reserved
            length = struct.unpack("<I", r.take(4, tag))[0]
        else:
            length = struct.unpack("<H", r.take(2, tag))[0]
    else:
        vr = vr_for_tag(tag)
        length = struct.unpack("<I", r.take(4, tag))[0]

    if vr == "SQ":
        return _read_sequence(r, tag, length, explicit)

    if length == UNDEFINED_LENGTH:
        if vr == "UN":
            # Undefined-length UN is an implicit-VR sequence per the standard.
            return _read_sequence(r, tag, length, explicit=False, vr="UN")
        raise UnsupportedFeature(f"undefined-length {vr} element at {tag} unsupported")

    raw = r.take(length, tag)
    return DataElement(tag, vr, raw)


def _read_item_body(r: _Reader, length: int, explicit: bool) -> DataSet:
    item = DataSet(transfer_syntax=EXPLICIT_VR_LE if explicit else IMPLICIT_VR_LE)
    if length == UNDEFINED_LENGTH:
        item.undefined_item_length = True
        while True:
            nxt = r.peek_tag()
            if nxt == ITEM_DELIM_TAG:
                r.take(8, nxt)  # delimiter tag + zero length
                break
            elem = _read_element(r, explicit)
            item.elements[elem.tag] = elem
    else:
        body = r.sub(length, ITEM_TAG)
        while body.remaining() > 0:
            elem = _read_element(body, explicit)
            item.elements[elem.tag] = elem
    return item


def _read_sequence(r: _Reader, tag: Tag, length: int, explicit: bool, vr: str = "SQ") -> DataElement:
    items: list[DataSet] = []
    if length == UNDEFINED_LENGTH:
        while True:
            head = r.peek_tag()
            if head == SEQ_DELIM_TAG:
                r.take(8, head)
                break
            if head != ITEM_TAG:
                raise TruncatedElement(tag, f"unexpected tag {head} inside sequence")
            r.take(4, head)
            item_len = struct.unpack("<I", r.take(4, head))[0]
            items.append(_read_item_body(r, item_len, explicit))
        return DataElement(tag, vr, b"", tuple(items), undefined_length=True)

    body = r.sub(length, tag)
    while body.remaining() > 0:
        head = body.peek_tag()
        if head != ITEM_TAG:
            raise TruncatedElement(tag, f"unexpected tag {head} inside sequence")
        body.take(4, head)
        item_len = struct.unpack("<I", body.take(4, head))[0]
        items.append(_read_item_body(body, item_len, explicit))
    return DataElement(tag, vr, b"", tuple(items), undefined_length=False)


def parse_file(data: bytes) -> DataSet:
    """Parse a complete Part 10 file from bytes.

    Raises MissingMagic, TruncatedElement, UnsupportedTransferSyntax or
    UnsupportedFeature; never reads past declared lengths.
    """
    if len(data) < _PREAMBLE_LEN + 4 or data[_PREAMBLE_LEN:_PREAMBLE_LEN + 4] != _MAGIC:
        raise MissingMagic("no DICM marker at offset 128")

    r = _Reader(data, _PREAMBLE_LEN + 4, len(data))
    ds = DataSet()

    # File meta group: always Explicit VR Little Endian.
    while r.remaining() >= 4 and r.peek_tag().group == 0x0002:
        elem = _read_element(r, explicit=True)
        ds.meta[elem.tag] = elem

    ts_elem = ds.meta.get(Tag(0x0002, 0x0010))
    if ts_elem is None:
        raise UnsupportedTransferSyntax("<missing (0002,0010)>")
    ts = ts_elem.decode_text()
    if ts == EXPLICIT_VR_LE:
        explicit = True
    elif ts == IMPLICIT_VR_LE:
        explicit = False
    else:
        raise UnsupportedTransferSyntax(ts)
    ds.transfer_syntax = ts

    while r.remaining() > 0:
        if r.remaining() < 8:
            raise TruncatedElement(None, "trailing bytes shorter than an element header")
        elem = _read_element(r, explicit)
        ds.elements[elem.tag] = elem
    return ds
