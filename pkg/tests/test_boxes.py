"""Box encoding, IoU, anchors, NMS and routing."""

import math

import numpy as np
import pytest

from deid.detector import (
    AnchorBox,
    BBox,
    BoxDelta,
    Detection,
    Route,
    decode_batch,
    decode_box,
    encode_batch,
    encode_box,
    iou,
    kmeans_anchors,
    nearest_anchor,
    nms,
    normalize_variance,
    route,
)


def random_boxes(rng, n):
    return [BBox(float(x), float(y), float(w), float(h))
            for x, y, w, h in zip(rng.uniform(5, 250, n), rng.uniform(5, 250, n),
                                  rng.uniform(1, 60, n), rng.uniform(1, 60, n))]


def test_identity_encoding():
    box = BBox(10, 20, 30, 40)
    delta = encode_box(box, AnchorBox(10, 20, 30, 40))
    assert (delta.tx, delta.ty, delta.tw, delta.th) == (0, 0, 0, 0)


def test_width_doubling():
    anchor = AnchorBox(10, 20, 30, 40)
    delta = encode_box(BBox(10, 20, 60, 40), anchor)
    assert delta.tw == pytest.approx(math.log(2))
    assert (delta.tx, delta.ty, delta.th) == (0, 0, 0)


def test_decode_fixtures():
    anchor = AnchorBox(10, 20, 30, 40)
    assert decode_box(BoxDelta(0, 0, 0, 0), anchor) == BBox(10, 20, 30, 40)
    tripled = decode_box(BoxDelta(0, 0, math.log(3), math.log(3)), anchor)
    assert tripled.w == pytest.approx(90)
    assert tripled.h == pytest.approx(120)


def test_roundtrip_10000_pairs(rng):
    boxes = np.column_stack([rng.uniform(5, 250, 10000), rng.uniform(5, 250, 10000),
                             rng.uniform(0.5, 80, 10000), rng.uniform(0.5, 80, 10000)])
    anchors = np.column_stack([rng.uniform(5, 250, 10000), rng.uniform(5, 250, 10000),
                               rng.uniform(0.5, 80, 10000), rng.uniform(0.5, 80, 10000)])
    back = decode_batch(encode_batch(boxes, anchors), anchors)
    assert np.abs(back - boxes).max() < 1e-9
    assert (back[:, 2] > 0).all() and (back[:, 3] > 0).all()


def test_iou_basic():
    a = BBox(10, 10, 10, 10)
    assert iou(a, a) == pytest.approx(1.0)
    assert iou(a, BBox(100, 100, 4, 4)) == 0.0
    b = BBox(15, 10, 10, 10)  # half-overlap in x
    assert iou(a, b) == pytest.approx(50 / 150)


def test_iou_symmetric_and_bounded(rng):
    boxes = random_boxes(rng, 40)
    for a, b in zip(boxes[:20], boxes[20:]):
        v = iou(a, b)
        assert 0.0 <= v <= 1.0
        assert v == pytest.approx(iou(b, a))


def test_iou_raster_oracle(rng):
    # Analytic IoU against counting integer pixel membership.
    for _ in range(10):
        a = BBox(float(rng.integers(30, 70)), float(rng.integers(30, 70)),
                 float(rng.integers(10, 40) * 2), float(rng.integers(10, 40) * 2))
        b = BBox(float(rng.integers(30, 70)), float(rng.integers(30, 70)),
                 float(rng.integers(10, 40) * 2), float(rng.integers(10, 40) * 2))
        grid_a = np.zeros((160, 160), bool)
        grid_b = np.zeros((160, 160), bool)
        grid_a[int(a.y0):int(a.y1), int(a.x0):int(a.x1)] = True
        grid_b[int(b.y0):int(b.y1), int(b.x0):int(b.x1)] = True
        union = np.logical_or(grid_a, grid_b).sum()
        inter = np.logical_and(grid_a, grid_b).sum()
        raster = inter / union if union else 0.0
        analytic = iou(a, b)
        assert abs(analytic - raster) <= 0.02 * max(raster, 1e-9) + 1e-9


def test_kmeans_anchor_templates(rng):
    boxes = random_boxes(rng, 200)
    templates = kmeans_anchors(boxes, k=5)
    assert templates.shape == (5, 2)
    areas = templates[:, 0] * templates[:, 1]
    assert (np.diff(areas) >= 0).all()
    anchor = nearest_anchor(boxes[0], templates)
    assert (anchor.x, anchor.y) == (boxes[0].x, boxes[0].y)


def _det(x, p, nv=0.0, cls=1):
    mean = np.zeros(3)
    mean[cls] = p
    mean[0] = 1 - p
    return Detection(
        box=BBox(x, 50, 20, 10), class_mean=mean, class_var=np.zeros(3),
        objectness=p, raw_uncertainty=nv, normalized_var=nv,
    )


def test_nms_single_and_duplicate():
    one = _det(50, 0.9)
    assert nms([one]) == [one]
    a, b = _det(50, 0.9), _det(50, 0.8)
    kept = nms([a, b])
    assert kept == [a]


def test_nms_postcondition(rng):
    dets = [_det(float(rng.uniform(20, 230)), float(rng.uniform(0.1, 1.0)))
            for _ in range(40)]
    kept = nms(dets, 0.5)
    for i, a in enumerate(kept):
        for b in kept[i + 1:]:
            assert iou(a.box, b.box) < 0.5


def test_normalize_variance_endpoints():
    dets = [_det(50, 0.9, nv=0.0), _det(100, 0.9, nv=0.0), _det(150, 0.9, nv=0.0)]
    raws = [0.2, 0.5, 0.8]
    dets = [Detection(d.box, d.class_mean, d.class_var, d.objectness, raw)
            for d, raw in zip(dets, raws)]
    out = normalize_variance(dets)
    values = [d.normalized_var for d in out]
    assert values[0] == 0.0 and values[-1] == 1.0

    # Affine transforms of raw u leave NV unchanged.
    shifted = [Detection(d.box, d.class_mean, d.class_var, d.objectness,
                         raw * 3.5 + 2.0) for d, raw in zip(dets, raws)]
    out2 = normalize_variance(shifted)
    np.testing.assert_allclose([d.normalized_var for d in out2], values)


def test_normalize_variance_degenerate():
    only = [_det(50, 0.9, nv=0.0)]
    out = normalize_variance(only)
    assert out[0].normalized_var == 0.0


def test_route_rules():
    phi = _det(50, 0.9, nv=0.0, cls=2)
    assert route(phi, 0.5) is Route.AUTO_REDACT
    uncertain = _det(50, 0.9, nv=1.0, cls=2)
    assert route(uncertain, 0.5) is Route.QUARANTINE
    background = _det(50, 0.2, nv=0.0, cls=0)
    background = Detection(background.box, np.array([0.8, 0.1, 0.1]),
                           np.zeros(3), 0.2, 0.0, 0.0)
    assert route(background, 0.5) is Route.DISCARD


def test_route_monotone(rng):
    for _ in range(50):
        nv = float(rng.uniform(0, 1))
        det = _det(50, 0.9, nv=nv, cls=2)
        low, high = sorted(rng.uniform(0, 1, 2))
        at_low = route(det, low)
        at_high = route(det, high)
        if at_low is Route.AUTO_REDACT:
            assert at_high is Route.AUTO_REDACT
