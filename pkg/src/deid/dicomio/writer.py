"""DICOM Part 10 serialization."""

from __future__ import annotations

import struct

from .elements import DataElement, DataSet, OddValueLength, UnsupportedTransferSyntax, element_from_text
from .tags import (
    EXPLICIT_VR_LE,
    IMPLICIT_VR_LE,
    ITEM_DELIM_TAG,
    ITEM_TAG,
    LONG_HEADER_VRS,
    SEQ_DELIM_TAG,
    Tag,
    UNDEFINED_LENGTH,
)

_IMPLEMENTATION_UID = "2.25.310891261379990891670891321892786432161"
_IMPLEMENTATION_NAME = "DEID_0_1"


def _write_explicit_header(out: bytearray, tag: Tag, vr: str, length: int) -> None:
    out += struct.pack("<HH", tag.group, tag.element)
    out += vr.encode("ascii")
    if vr in LONG_HEADER_VRS:
        out += b"\x00\x00"
        out += struct.pack("<I", length)
    else:
        if length > 0xFFFF:
            raise OddValueLength(tag, length)  # cannot express in a short header
        out += struct.pack("<H", length)


def _write_implicit_header(out: bytearray, tag: Tag, length: int) -> None:
    out += struct.pack("<HH", tag.group, tag.element)
    out += struct.pack("<I", length)


def _encode_item(item: DataSet, explicit: bool) -> bytes:
    body = bytearray()
    for elem in item.iter_elements():
        _write_element(body, elem, explicit)
    out = bytearray()
    out += struct.pack("<HH", ITEM_TAG.group, ITEM_TAG.element)
    if item.undefined_item_length:
        out += struct.pack("<I", UNDEFINED_LENGTH)
        out += body
        out += struct.pack("<HHI", ITEM_DELIM_TAG.group, ITEM_DELIM_TAG.element, 0)
    else:
        out += struct.pack("<I", len(body))
        out += body
    return bytes(out)


def _write_element(out: bytearray, elem: DataElement, explicit: bool) -> None:
    if elem.vr == "SQ" or elem.items:
        payload = b"".join(_encode_item(item, explicit) for item in elem.items)
        if elem.undefined_length:
            if explicit:
                _write_explicit_header(out, elem.tag, elem.vr, UNDEFINED_LENGTH)
            else:
                _write_implicit_header(out, elem.tag, UNDEFINED_LENGTH)
            out += payload
            out += struct.pack("<HHI", SEQ_DELIM_TAG.group, SEQ_DELIM_TAG.element, 0)
        else:
            if explicit:
                _write_explicit_header(out, elem.tag, elem.vr, len(payload))
            else:
                _write_implicit_header(out, elem.tag, len(payload))
            out += payload
        return

    if len(elem.raw) % 2 != 0:
        raise OddValueLength(elem.tag, len(elem.raw))
    if explicit:
        _write_explicit_header(out, elem.tag, elem.vr, len(elem.raw))
    else:
        _write_implicit_header(out, elem.tag, len(elem.raw))
    out += elem.raw


def build_meta(ds: DataSet) -> dict[Tag, DataElement]:
    """Fill the required group-0002 elements, preserving any already set."""
    meta = dict(ds.meta)
    meta.setdefault(
        Tag(0x0002, 0x0001),
        DataElement(Tag(0x0002, 0x0001), "OB", b"\x00\x01"),
    )
    sop_class = ds.get(Tag(0x0008, 0x0016))
    if sop_class is not None:
        meta[Tag(0x0002, 0x0002)] = DataElement(Tag(0x0002, 0x0002), "UI", sop_class.raw)
    sop_inst = ds.get(Tag(0x0008, 0x0018))
    if sop_inst is not None:
        meta[Tag(0x0002, 0x0003)] = DataElement(Tag(0x0002, 0x0003), "UI", sop_inst.raw)
    meta[Tag(0x0002, 0x0010)] = element_from_text(Tag(0x0002, 0x0010), "UI", ds.transfer_syntax)
    meta.setdefault(
        Tag(0x0002, 0x0012),
        element_from_text(Tag(0x0002, 0x0012), "UI", _IMPLEMENTATION_UID),
    )
    meta.setdefault(
        Tag(0x0002, 0x0013),
        element_from_text(Tag(0x0002, 0x0013), "SH", _IMPLEMENTATION_NAME),
    )
    return meta


def serialize(ds: DataSet) -> bytes:
    """Emit preamble, magic, meta and body; element order strictly by tag.

    The (0002,0000) group length is always recomputed.
    """
    if ds.transfer_syntax == EXPLICIT_VR_LE:
        explicit = True
    elif ds.transfer_syntax == IMPLICIT_VR_LE:
        explicit = False
    else:
        raise UnsupportedTransferSyntax(ds.transfer_syntax)

    meta = build_meta(ds)
    meta.pop(Tag(0x0002, 0x0000), None)
    meta_body = bytearray()
    for t in sorted(meta):
        _write_element(meta_body, meta[t], explicit=True)

    out = bytearray(b"\x00" * 128)
    out += b"DICM"
    group_len = DataElement(Tag(0x0002, 0x0000), "UL", struct.pack("<I", len(meta_body)))
    _write_element(out, group_len, explicit=True)
    out += meta_body

    for elem in ds.iter_elements():
        _write_element(out, elem, explicit)
    return bytes(out)
