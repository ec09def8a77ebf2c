"""Building labeled proposal sets from the synthetic corpus."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..ner.lexicon import Lexicons
from ..synth.corpus import CorpusSpec, generate_corpus
from ..vdp.losses import Batch
from .anchors import anchor_features, kmeans_anchors, nearest_anchor
from .boxes import BBox, encode_box, iou_matrix
from .proposals import Proposal, propose_regions


def head_features(prop: Proposal, templates: np.ndarray) -> np.ndarray:
    """Descriptor fed to the head: proposal features plus anchor ratios."""
    anchor = nearest_anchor(prop.box, templates)
    return np.concatenate([prop.features, anchor_features(prop.box, anchor)])

_POS_IOU = 0.5
_NEG_IOU = 0.3


@dataclass
class LabeledProposals:
    batch: Batch
    anchor_templates: np.ndarray
    feature_mean: np.ndarray
    feature_std: np.ndarray


def _label_one_image(
    proposals: list[Proposal],
    truth_boxes: list[BBox],
    truth_is_phi: list[bool],
    templates: np.ndarray,
) -> tuple[list[np.ndarray], list[int], list[np.ndarray], list[float]]:
    feats, labels, targets, positives = [], [], [], []
    if proposals:
        overlap = iou_matrix([p.box for p in proposals], truth_boxes) if truth_boxes else None
        for i, prop in enumerate(proposals):
            if overlap is None or overlap.shape[1] == 0:
                best_iou, best_j = 0.0, -1
            else:
                best_j = int(np.argmax(overlap[i]))
                best_iou = float(overlap[i, best_j])
            if best_iou >= _POS_IOU:
                label = 2 if truth_is_phi[best_j] else 1
                anchor = nearest_anchor(prop.box, templates)
                delta = encode_box(truth_boxes[best_j], anchor)
                feats.append(head_features(prop, templates))
                labels.append(label)
                targets.append(delta.to_array())
                positives.append(1.0)
            elif best_iou < _NEG_IOU:
                feats.append(head_features(prop, templates))
                labels.append(0)
                targets.append(np.zeros(4))
                positives.append(0.0)
            # in-between proposals are ambiguous and skipped
    return feats, labels, targets, positives


def build_labeled_set(
    spec: CorpusSpec,
    split: str,
    lexicons: Lexicons | None = None,
    templates: np.ndarray | None = None,
) -> LabeledProposals:
    """Proposals labeled against ground truth over one corpus split."""
    per_image = []
    truth_box_pool: list[BBox] = []
    for image in generate_corpus(spec, split=split, lexicons=lexicons):
        proposals = propose_regions(image.frame)
        boxes = [b.box for b in image.burns]
        phi = [b.is_phi for b in image.burns]
        truth_box_pool.extend(boxes)
        per_image.append((proposals, boxes, phi))

    if templates is None:
        templates = kmeans_anchors(truth_box_pool, k=5)

    feats, labels, targets, positives = [], [], [], []
    for proposals, boxes, phi in per_image:
        f, l, t, p = _label_one_image(proposals, boxes, phi, templates)
        feats.extend(f)
        labels.extend(l)
        targets.extend(t)
        positives.extend(p)

    features = np.stack(feats) if feats else np.zeros((0, 12))
    feature_mean = features.mean(axis=0) if len(features) else np.zeros(features.shape[1])
    feature_std = features.std(axis=0) if len(features) else np.ones(features.shape[1])
    feature_std = np.where(feature_std < 1e-9, 1.0, feature_std)

    batch = Batch(features, np.array(labels, dtype=np.int64),
                  np.stack(targets) if targets else np.zeros((0, 4)),
                  np.array(positives))
    return LabeledProposals(batch, templates, feature_mean, feature_std)
