"""Per-tag action codes and dummy-value rules."""

from __future__ import annotations

from enum import Enum

from ..dicomio import Tag


class ActionCode(str, Enum):
    X = "X"  # remove
    Z = "Z"  # blank (zero-length)
    D = "D"  # replace with a type-conformant dummy
    K = "K"  # keep byte-identical
    C = "C"  # clean via text analysis (dates shift under an active policy)
    U = "U"  # remap UID


class UnknownVRForDummy(Exception):
    def __init__(self, tag: Tag, vr: str):
        self.tag = tag
        self.vr = vr
        super().__init__(f"no dummy rule for VR {vr} at {tag}")


_TEXT_DUMMIES = {
    "PN": "ANONYMOUS",
    "DA": "19000101",
    "TM": "000000",
    "DT": "19000101000000",
    "AS": "000Y",
    "IS": "0",
    "DS": "0",
}

_NUMERIC_ZERO_VRS = frozenset({"US", "UL", "SS", "SL", "FL", "FD"})


def dummy_for(tag: Tag, vr: str, override: str | None = None) -> str | int:
    """Dummy replacement value; UI must be handled by the caller via remap."""
    if override is not None:
        return override
    if vr in _TEXT_DUMMIES:
        return _TEXT_DUMMIES[vr]
    if vr in _NUMERIC_ZERO_VRS:
        return 0
    raise UnknownVRForDummy(tag, vr)
