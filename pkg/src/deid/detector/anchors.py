"""Anchor templates from training-split box statistics (k-means over extents)."""

from __future__ import annotations

import numpy as np

from .boxes import AnchorBox, BBox


def kmeans_anchors(boxes: list[BBox], k: int = 5, iters: int = 50,
                   seed: int = 0) -> np.ndarray:
    """Cluster (w, h) extents into k templates; returns (k, 2) sorted by area."""
    if not boxes:
        raise ValueError("no boxes to cluster")
    extents = np.stack([[b.w, b.h] for b in boxes]).astype(np.float64)
    k = min(k, len(extents))
    rng = np.random.default_rng(seed)
    centers = extents[rng.choice(len(extents), size=k, replace=False)]
    for _ in range(iters):
        d2 = ((extents[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        assign = d2.argmin(axis=1)
        moved = 0.0
        for j in range(k):
            members = extents[assign == j]
            if len(members) == 0:
                continue
            new = members.mean(axis=0)
            moved += float(np.abs(new - centers[j]).sum())
            centers[j] = new
        if moved < 1e-9:
            break
    order = np.argsort(centers[:, 0] * centers[:, 1])
    return centers[order]


def nearest_anchor(box: BBox, templates: np.ndarray) -> AnchorBox:
    """Template sized anchor centered on the box (extent-overlap nearest)."""
    w = np.minimum(templates[:, 0], box.w)
    h = np.minimum(templates[:, 1], box.h)
    inter = w * h
    union = templates[:, 0] * templates[:, 1] + box.area - inter
    best = int(np.argmax(inter / union))
    return AnchorBox(box.x, box.y, float(templates[best, 0]), float(templates[best, 1]))


def anchor_features(box: BBox, anchor: AnchorBox) -> np.ndarray:
    """Log size ratios of proposal vs its anchor template; appended to the
    proposal descriptor so the head sees the regression reference frame."""
    return np.array([np.log(box.w / anchor.w), np.log(box.h / anchor.h)])
