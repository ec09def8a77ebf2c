"""Render string-valued elements as "TagName: value" context lines.

Pairing the tag name with the value gives short, context-poor fields enough
surrounding signal for entity detection; detected offsets map back onto the
bare value by subtracting the prefix length.
"""

from __future__ import annotations

from ..dicomio import DataSet, keyword_for
from ..dicomio.tags import STRING_VRS, Tag
from .labels import TagValueLine


def tag_value_lines(ds: DataSet) -> list[TagValueLine]:
    codec = ds.codec()
    lines: list[TagValueLine] = []
    for elem in ds.iter_elements():
        if elem.vr == "SQ":
            continue
        if elem.vr == "UI" or elem.vr in STRING_VRS:
            value = elem.decode_text(codec)
            lines.append(TagValueLine(keyword_for(elem.tag), value))
    return lines


def line_for(ds: DataSet, tag: Tag) -> TagValueLine:
    elem = ds[tag]
    return TagValueLine(keyword_for(tag), elem.decode_text(ds.codec()))
