"""Modality-styled synthetic backgrounds.

Smooth intensity gradients, nested ellipses and low-frequency texture keep
the appearance loosely anatomical while staying well below the burn
intensity, so burned text is always the brightest structure.
"""

from __future__ import annotations

import numpy as np

MODALITIES = ("CT", "MR", "CR")

# Content tops out at 80% of a 12-bit-style range inside a 16-bit container.
CONTENT_MAX = 4000
BACKGROUND_CAP = int(CONTENT_MAX * 0.8)


def _grid(rows: int, cols: int) -> tuple[np.ndarray, np.ndarray]:
    y = np.linspace(-1.0, 1.0, rows)[:, None]
    x = np.linspace(-1.0, 1.0, cols)[None, :]
    return y, x


def _ellipse(y, x, cy, cx, ry, rx) -> np.ndarray:
    return ((y - cy) / ry) ** 2 + ((x - cx) / rx) ** 2 <= 1.0


def _texture(rng: np.random.Generator, y, x, strength: float) -> np.ndarray:
    out = np.zeros(np.broadcast_shapes(y.shape, x.shape))
    for _ in range(3):
        fy, fx = rng.uniform(1.0, 4.0, size=2)
        py, px = rng.uniform(0, 2 * np.pi, size=2)
        out += np.cos(fy * np.pi * y + py) * np.cos(fx * np.pi * x + px)
    return out * strength / 3.0


def phantom(modality: str, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    if modality not in MODALITIES:
        raise ValueError(f"modality {modality!r} not one of {MODALITIES}")
    y, x = _grid(rows, cols)
    img = np.zeros((rows, cols), dtype=np.float64)

    if modality == "CT":
        body = _ellipse(y, x, 0.0, 0.0, rng.uniform(0.75, 0.9), rng.uniform(0.6, 0.8))
        img[body] = 0.45
        lung_dx = rng.uniform(0.25, 0.35)
        for side in (-1, 1):
            lung = _ellipse(y, x, -0.05, side * lung_dx, 0.4, 0.22)
            img[lung & body] = 0.18
        spine = _ellipse(y, x, 0.45, 0.0, 0.12, 0.08)
        img[spine & body] = 0.72
    elif modality == "MR":
        skull = _ellipse(y, x, 0.0, 0.0, rng.uniform(0.8, 0.9), rng.uniform(0.65, 0.75))
        brain = _ellipse(y, x, 0.0, 0.0, rng.uniform(0.65, 0.75), rng.uniform(0.5, 0.6))
        img[skull] = 0.6
        img[brain] = 0.4
        for side in (-1, 1):
            vent = _ellipse(y, x, -0.05, side * 0.12, 0.25, 0.07)
            img[vent & brain] = 0.15
    else:  # CR
        img += 0.35 + 0.15 * (1 - np.abs(y)) * np.ones_like(x)
        ribs = 0.08 * np.cos(7 * np.pi * y) * (np.abs(x) < 0.7)
        img += np.broadcast_to(ribs, img.shape)
        mediastinum = np.abs(x) < 0.18
        img[np.broadcast_to(mediastinum, img.shape)] += 0.18

    img += _texture(rng, y, x, 0.05)
    img += rng.normal(0.0, 0.01, size=img.shape)
    img = np.clip(img, 0.0, 0.8)
    return (img * CONTENT_MAX).astype(np.uint16)
