"""Image augmentations with consistent ground-truth box transforms."""

from __future__ import annotations

import math

import numpy as np

from ..detector.boxes import BBox
from .noise import NoiseSpec, SNR_LADDER, add_salt_pepper

AUGMENT_OPS = (
    "invert", "pad", "hflip", "vflip", "rotate",
    "resize_shortest_edge", "salt_pepper", "gaussian_noise",
)


def invert(frame: np.ndarray, boxes: list[BBox]) -> tuple[np.ndarray, list[BBox]]:
    info = np.iinfo(frame.dtype)
    return info.max - frame, list(boxes)


def hflip(frame: np.ndarray, boxes: list[BBox]) -> tuple[np.ndarray, list[BBox]]:
    w = frame.shape[1]
    return np.ascontiguousarray(frame[:, ::-1]), [BBox(w - b.x, b.y, b.w, b.h) for b in boxes]


def vflip(frame: np.ndarray, boxes: list[BBox]) -> tuple[np.ndarray, list[BBox]]:
    h = frame.shape[0]
    return np.ascontiguousarray(frame[::-1, :]), [BBox(b.x, h - b.y, b.w, b.h) for b in boxes]


def pad(frame: np.ndarray, boxes: list[BBox],
        top: int, bottom: int, left: int, right: int) -> tuple[np.ndarray, list[BBox]]:
    out = np.pad(frame, ((top, bottom), (left, right)), constant_values=0)
    return out, [BBox(b.x + left, b.y + top, b.w, b.h) for b in boxes]


def rotate(frame: np.ndarray, boxes: list[BBox], degrees: float) -> tuple[np.ndarray, list[BBox]]:
    """Rotate about the image center (nearest neighbor); boxes become the
    axis-aligned enclosure of their rotated corners, clipped to the frame."""
    h, w = frame.shape
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    theta = math.radians(degrees)
    cos_t, sin_t = math.cos(theta), math.sin(theta)

    yy, xx = np.meshgrid(np.arange(h), np.arange(w), indexing="ij")
    # Inverse map: output pixel -> source coordinates.
    sx = cos_t * (xx - cx) + sin_t * (yy - cy) + cx
    sy = -sin_t * (xx - cx) + cos_t * (yy - cy) + cy
    sxi = np.rint(sx).astype(np.int64)
    syi = np.rint(sy).astype(np.int64)
    valid = (sxi >= 0) & (sxi < w) & (syi >= 0) & (syi < h)
    out = np.zeros_like(frame)
    out[valid] = frame[syi[valid], sxi[valid]]

    new_boxes: list[BBox] = []
    for b in boxes:
        corners = np.array([[b.x0, b.y0], [b.x1, b.y0], [b.x0, b.y1], [b.x1, b.y1]])
        rel = corners - [cx, cy]
        rot_x = cos_t * rel[:, 0] - sin_t * rel[:, 1] + cx
        rot_y = sin_t * rel[:, 0] + cos_t * rel[:, 1] + cy
        enclosure = BBox.from_corners(rot_x.min(), rot_y.min(), rot_x.max(), rot_y.max())
        new_boxes.append(enclosure.clipped(w, h))
    return out, new_boxes


def resize_shortest_edge(frame: np.ndarray, boxes: list[BBox],
                         target: int) -> tuple[np.ndarray, list[BBox]]:
    h, w = frame.shape
    scale = target / min(h, w)
    nh, nw = int(round(h * scale)), int(round(w * scale))
    ys = np.clip((np.arange(nh) / scale).astype(np.int64), 0, h - 1)
    xs = np.clip((np.arange(nw) / scale).astype(np.int64), 0, w - 1)
    out = frame[np.ix_(ys, xs)]
    return out, [BBox(b.x * scale, b.y * scale, b.w * scale, b.h * scale) for b in boxes]


def gaussian_noise(frame: np.ndarray, boxes: list[BBox], sigma: float,
                   rng: np.random.Generator) -> tuple[np.ndarray, list[BBox]]:
    info = np.iinfo(frame.dtype)
    noisy = frame.astype(np.float64) + rng.normal(0.0, sigma, size=frame.shape)
    return np.clip(noisy, info.min, info.max).astype(frame.dtype), list(boxes)


def augment(
    frame: np.ndarray,
    boxes: list[BBox],
    ops: list,
    seed: int,
) -> tuple[np.ndarray, list[BBox]]:
    """Apply ops in order; each op is a name or a (name, params) pair.

    Unspecified parameters are drawn from the seeded generator, so a chain is
    reproducible bitwise for a fixed (ops, seed).
    """
    rng = np.random.default_rng(seed)
    for op in ops:
        name, params = op if isinstance(op, tuple) else (op, {})
        if name not in AUGMENT_OPS:
            raise ValueError(f"unknown augmentation {name!r}")
        if name == "invert":
            frame, boxes = invert(frame, boxes)
        elif name == "hflip":
            frame, boxes = hflip(frame, boxes)
        elif name == "vflip":
            frame, boxes = vflip(frame, boxes)
        elif name == "pad":
            amounts = params.get("amounts") or tuple(int(v) for v in rng.integers(0, 17, size=4))
            frame, boxes = pad(frame, boxes, *amounts)
        elif name == "rotate":
            degrees = params.get("degrees")
            if degrees is None:
                degrees = float(rng.uniform(-30.0, 30.0))
            frame, boxes = rotate(frame, boxes, degrees)
        elif name == "resize_shortest_edge":
            target = int(params.get("target") or rng.integers(192, 321))
            frame, boxes = resize_shortest_edge(frame, boxes, target)
        elif name == "salt_pepper":
            snr = params.get("snr_db") or int(rng.choice(SNR_LADDER[5:]))
            frame, _rho = add_salt_pepper(frame, NoiseSpec(snr), rng)
        elif name == "gaussian_noise":
            sigma = float(params.get("sigma") or rng.uniform(20.0, 120.0))
            frame, boxes = gaussian_noise(frame, boxes, sigma, rng)
    return frame, boxes
