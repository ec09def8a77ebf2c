"""mAP, sweep statistics, thresholds, quadrants and the objective."""

import numpy as np
import pytest

from deid.detector import BBox
from deid.evals import (
    ObjectiveWeights,
    ScoredBox,
    TruthBox,
    UncertaintyPoint,
    iou_threshold,
    map_at,
    mean_uncertainty,
    noise_slope,
    objective,
    pooled_variance,
    quadrants,
    v_clean,
)
from deid.evals.sweep import NoCleanRungs


def test_map_perfect_detections():
    truths = [TruthBox("a", BBox(10, 10, 6, 6), 1), TruthBox("b", BBox(30, 30, 8, 8), 2)]
    dets = [ScoredBox(t.image_id, t.box, t.label, 1.0) for t in truths]
    report = map_at(dets, truths, (0.5,))
    assert report.map50 == pytest.approx(1.0)


def test_map_no_detections():
    truths = [TruthBox("a", BBox(10, 10, 6, 6), 1)]
    report = map_at([], truths, (0.5,))
    assert report.map50 == 0.0


def test_map_hand_enumerated_staircase():
    # 3 images, one class; detections sorted by score: hit, duplicate
    # (matches an already-consumed truth -> FP), hit; one truth missed.
    truths = [
        TruthBox("i1", BBox(10, 10, 10, 10), 1),
        TruthBox("i2", BBox(20, 20, 10, 10), 1),
        TruthBox("i3", BBox(30, 30, 10, 10), 1),
    ]
    dets = [
        ScoredBox("i1", BBox(10, 10, 10, 10), 1, 0.9),   # TP, recall 1/3, prec 1
        ScoredBox("i1", BBox(11, 10, 10, 10), 1, 0.8),   # duplicate -> FP
        ScoredBox("i2", BBox(20, 20, 10, 10), 1, 0.7),   # TP, recall 2/3
    ]
    # PR points: (1/3, 1/1), (1/3, 1/2), (2/3, 2/3); envelope:
    # precision 1.0 up to recall 1/3, then 2/3 up to recall 2/3.
    expected = (1 / 3) * 1.0 + (1 / 3) * (2 / 3)
    report = map_at(dets, truths, (0.5,))
    assert report.map50 == pytest.approx(expected)


def test_map_monotone_removing_fp(rng):
    truths = [TruthBox("a", BBox(10, 10, 10, 10), 1)]
    dets = [
        ScoredBox("a", BBox(10, 10, 10, 10), 1, 0.9),
        ScoredBox("a", BBox(60, 60, 10, 10), 1, 0.95),  # confident FP
    ]
    with_fp = map_at(dets, truths, (0.5,)).map50
    without = map_at(dets[:1], truths, (0.5,)).map50
    assert without >= with_fp


def test_map_permutation_invariant(rng):
    truths = [TruthBox(f"i{k}", BBox(10 + k, 10, 8, 8), 1) for k in range(6)]
    dets = [ScoredBox(f"i{k}", BBox(10 + k, 10, 8, 8), 1, float(rng.random()))
            for k in range(6)]
    base = map_at(dets, truths, (0.5,)).map50
    for _ in range(4):
        perm = [dets[i] for i in rng.permutation(len(dets))]
        assert map_at(perm, truths, (0.5,)).map50 == pytest.approx(base)


def test_mean_uncertainty_two_level():
    by_image = {"a": [0.2, 0.2, 0.2], "b": [0.4]}
    # flat average would be (0.6+0.4)/4 = 0.25; two-level is 0.3
    assert mean_uncertainty(by_image) == pytest.approx(0.3)
    flat = np.mean([v for values in by_image.values() for v in values])
    assert flat != pytest.approx(0.3)


def test_mean_uncertainty_skips_empty_images():
    assert mean_uncertainty({"a": [0.5], "b": []}) == pytest.approx(0.5)


def test_noise_slope_fixtures():
    rungs = [124, 64, 32, 12, 4, 2]
    constant = {float(s): 0.7 for s in rungs}
    assert noise_slope(constant) == pytest.approx(0.0)
    linear = {float(s): 1.0 / s for s in rungs}
    assert noise_slope(linear) == pytest.approx(1.0)
    # good reactance: uncertainty rising as SNR falls -> positive slope
    reactive = {124.0: 0.05, 32.0: 0.1, 8.0: 0.3, 2.0: 0.6}
    assert noise_slope(reactive) > 0


def test_v_clean():
    pops = {124.0: np.array([0.3, 0.3]), 45.0: np.array([0.0, 1.0]),
            12.0: np.array([0.0, 0.5, 1.0])}
    # clean rungs are >30: variances 0 and 0.25 -> mean 0.125
    assert v_clean(pops) == pytest.approx((0.0 + 0.25) / 2)
    only_clean = {45.0: np.array([0.0, 1.0])}
    assert v_clean(only_clean) == pytest.approx(0.25)
    with pytest.raises(NoCleanRungs):
        v_clean({12.0: np.array([0.1])})
    # adding a noisy rung leaves v_clean unchanged
    with_noise = dict(only_clean)
    with_noise[8.0] = np.array([0.9, 0.95])
    assert v_clean(with_noise) == pytest.approx(0.25)
    assert pooled_variance(pops, [12.0]) == pytest.approx(np.var([0.0, 0.5, 1.0]))


def brute_force_iou_threshold(points, iou_cut=0.5):
    candidates = sorted({p.nv for p in points} | {1.0}, reverse=True)
    for u in candidates:
        fp = sum(1 for p in points if p.nv < u and p.iou < iou_cut)
        if fp == 0:
            return u
    return 0.0


def test_iou_threshold_fixtures():
    all_good = [UncertaintyPoint(nv, 0.9) for nv in (0.1, 0.5, 0.9)]
    assert iou_threshold(all_good) == 1.0
    single_bad = all_good + [UncertaintyPoint(0.3, 0.2)]
    assert iou_threshold(single_bad) == pytest.approx(0.3)


def test_iou_threshold_matches_exhaustive_scan(rng):
    for _ in range(100):
        points = [UncertaintyPoint(float(rng.random()), float(rng.random()))
                  for _ in range(50)]
        assert iou_threshold(points) == pytest.approx(brute_force_iou_threshold(points))


def test_quadrants_partition_and_fixture():
    points = [
        UncertaintyPoint(0.1, 0.9),  # TP
        UncertaintyPoint(0.2, 0.8),  # TP
        UncertaintyPoint(0.9, 0.9),  # FN
        UncertaintyPoint(0.8, 0.2),  # TN
        UncertaintyPoint(0.1, 0.1),  # FP
        UncertaintyPoint(0.6, 0.7),  # FN (nv >= 0.5)
        UncertaintyPoint(0.4, 0.3),  # FP
        UncertaintyPoint(0.5, 0.1),  # TN (nv == thresh -> not confident)
    ]
    report = quadrants(points, 0.5)
    assert (report.tp, report.fn, report.tn, report.fp) == (2, 2, 2, 2)
    assert report.total == len(points)
    assert report.fnr == pytest.approx(2 / 8)


def test_quadrants_all_tp():
    points = [UncertaintyPoint(0.0, 1.0)] * 5
    report = quadrants(points, 0.5)
    assert report.fnr == 0.0


def test_quadrants_partition_property(rng):
    points = [UncertaintyPoint(float(rng.random()), float(rng.random()))
              for _ in range(200)]
    for thresh in (0.0, 0.3, 0.7, 1.0):
        report = quadrants(points, thresh)
        assert report.total == 200


def test_objective_weight_isolation():
    weights = ObjectiveWeights(alpha=1, beta=0, gamma=0, delta=0, epsilon=0)
    assert objective(0.87, -5, 4, 3, 2, weights) == pytest.approx(0.87)
    zero = ObjectiveWeights(0, 0, 0, 0, 0)
    assert objective(1, 1, 1, 1, 1, zero) == 0.0


def test_objective_fixture():
    value = objective(0.9, -0.2, 0.05, 0.1, 0.6, ObjectiveWeights(1, 1, 1, 1, 1))
    assert value == pytest.approx(0.9 + 0.2 - 0.05 - 0.1 + 0.6)
    assert value == pytest.approx(1.55)


def test_objective_affine_in_each_weight(rng):
    args = (0.9, -0.2, 0.05, 0.1, 0.6)
    for field in ("alpha", "beta", "gamma", "delta", "epsilon"):
        w0 = ObjectiveWeights(**{field: 0.0})
        w1 = ObjectiveWeights(**{field: 1.0})
        w2 = ObjectiveWeights(**{field: 2.0})
        y0, y1, y2 = (objective(*args, w) for w in (w0, w1, w2))
        assert y2 - y1 == pytest.approx(y1 - y0)
