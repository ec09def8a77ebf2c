"""Built-in 5x7 bitmap glyphs with two styles (thin strokes and block).

No font library: glyphs are hand-defined dot-matrix patterns. The block
style is the thin pattern dilated by one pixel inside a padded cell, so
stroke width (and fill ratio) separates the styles at any scale.
"""

from __future__ import annotations

import numpy as np

_RAW = {
    "A": ("..#..", ".#.#.", "#...#", "#...#", "#####", "#...#", "#...#"),
    "B": ("####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."),
    "C": (".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."),
    "D": ("####.", "#...#", "#...#", "#...#", "#...#", "#...#", "####."),
    "E": ("#####", "#....", "#....", "####.", "#....", "#....", "#####"),
    "F": ("#####", "#....", "#....", "####.", "#....", "#....", "#...."),
    "G": (".###.", "#...#", "#....", "#.###", "#...#", "#...#", ".###."),
    "H": ("#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"),
    "I": ("#####", "..#..", "..#..", "..#..", "..#..", "..#..", "#####"),
    "J": ("..###", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."),
    "K": ("#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#"),
    "L": ("#....", "#....", "#....", "#....", "#....", "#....", "#####"),
    "M": ("#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"),
    "N": ("#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#", "#...#"),
    "O": (".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."),
    "P": ("####.", "#...#", "#...#", "####.", "#....", "#....", "#...."),
    "Q": (".###.", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#"),
    "R": ("####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#"),
    "S": (".####", "#....", "#....", ".###.", "....#", "....#", "####."),
    "T": ("#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."),
    "U": ("#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."),
    "V": ("#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", "..#.."),
    "W": ("#...#", "#...#", "#...#", "#.#.#", "#.#.#", "##.##", "#...#"),
    "X": ("#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#"),
    "Y": ("#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#.."),
    "Z": ("#####", "....#", "...#.", "..#..", ".#...", "#....", "#####"),
    "0": (".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."),
    "1": ("..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."),
    "2": (".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"),
    "3": (".###.", "#...#", "....#", "..##.", "....#", "#...#", ".###."),
    "4": ("...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."),
    "5": ("#####", "#....", "####.", "....#", "....#", "#...#", ".###."),
    "6": (".###.", "#....", "#....", "####.", "#...#", "#...#", ".###."),
    "7": ("#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."),
    "8": (".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."),
    "9": (".###.", "#...#", "#...#", ".####", "....#", "....#", ".###."),
    "-": (".....", ".....", ".....", "#####", ".....", ".....", "....."),
    ".": (".....", ".....", ".....", ".....", ".....", ".##..", ".##.."),
    ",": (".....", ".....", ".....", ".....", ".##..", "..#..", ".#..."),
    "/": ("....#", "....#", "...#.", "..#..", ".#...", "#....", "#...."),
    ":": (".....", ".##..", ".##..", ".....", ".##..", ".##..", "....."),
    "^": ("..#..", ".#.#.", "#...#", ".....", ".....", ".....", "....."),
    "(": ("..#..", ".#...", "#....", "#....", "#....", ".#...", "..#.."),
    ")": ("..#..", "...#.", "....#", "....#", "....#", "...#.", "..#.."),
    "#": (".#.#.", ".#.#.", "#####", ".#.#.", "#####", ".#.#.", ".#.#."),
    "@": (".###.", "#...#", "#.###", "#.#.#", "#.##.", "#....", ".###."),
}

STYLES = ("thin", "block")
GLYPH_H = {"thin": 7, "block": 9}
GLYPH_W = {"thin": 5, "block": 7}


def _bitmap(pattern: tuple[str, ...]) -> np.ndarray:
    return np.array([[c == "#" for c in row] for row in pattern], dtype=bool)


def _dilate(mask: np.ndarray) -> np.ndarray:
    padded = np.pad(mask, 1)
    out = padded.copy()
    out[1:, :] |= padded[:-1, :]
    out[:-1, :] |= padded[1:, :]
    out[:, 1:] |= padded[:, :-1]
    out[:, :-1] |= padded[:, 1:]
    return out


_THIN = {ch: _bitmap(rows) for ch, rows in _RAW.items()}
_BLOCK = {ch: _dilate(bm) for ch, bm in _THIN.items()}

SUPPORTED_CHARS = frozenset(_RAW) | {" "}


class UnsupportedGlyph(Exception):
    pass


def glyph(ch: str, style: str = "thin") -> np.ndarray:
    table = _THIN if style == "thin" else _BLOCK
    upper = ch.upper()
    if upper not in table:
        raise UnsupportedGlyph(f"no glyph for {ch!r}")
    return table[upper]


def render_text(text: str, style: str = "thin", scale: int = 1) -> np.ndarray:
    """Rasterize to a boolean ink mask; one blank column between glyphs."""
    if style not in STYLES:
        raise ValueError(f"style {style!r} not one of {STYLES}")
    if not (1 <= scale <= 4):
        raise ValueError(f"scale {scale} outside 1..4")
    height = GLYPH_H[style]
    width = GLYPH_W[style]
    cols: list[np.ndarray] = []
    for i, ch in enumerate(text.upper()):
        if i:
            cols.append(np.zeros((height, 1), dtype=bool))
        if ch == " ":
            cols.append(np.zeros((height, width), dtype=bool))
        else:
            cols.append(glyph(ch, style))
    mask = np.concatenate(cols, axis=1) if cols else np.zeros((height, 0), dtype=bool)
    if scale > 1:
        mask = np.kron(mask, np.ones((scale, scale), dtype=bool))
    return mask
