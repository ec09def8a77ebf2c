"""Training loop behavior: determinism, convergence, divergence handling."""

import numpy as np
import pytest

from deid.vdp import (
    Batch,
    DetectionHead,
    DivergenceDetected,
    LossCoefficients,
    TrainConfig,
    train,
)

COEFFS = LossCoefficients(1.0, 1.0, 0.01, 1e-4, 1e-4, 1e-4)


def separable_batch(rng, n=300):
    # Three linearly separable blobs; background boxes are zero targets.
    centers = np.array([[-3.0, 0.0, 0.0], [3.0, 3.0, 0.0], [0.0, -3.0, 3.0]])
    labels = rng.integers(0, 3, size=n)
    feats = centers[labels] + rng.normal(0, 0.3, size=(n, 3))
    targets = rng.normal(0, 0.1, size=(n, 4))
    positive = (labels > 0).astype(float)
    return Batch(feats, labels, targets, positive)


def test_separable_converges(rng):
    data = separable_batch(rng)
    head = DetectionHead(in_dim=3, hidden=(16,), seed=0)
    result = train(head, data, COEFFS, TrainConfig(epochs=200, seed=0))
    probs, _var, _boxes = head.predict(data.features)
    accuracy = float((probs.argmax(axis=1) == data.labels).mean())
    assert accuracy >= 0.99
    assert result.trajectory[-1] < result.trajectory[0]


def test_zero_epochs_leaves_head_unchanged(rng):
    data = separable_batch(rng, n=50)
    head = DetectionHead(in_dim=3, hidden=(8,), seed=0)
    before = [p["weight_mean"].copy() for p in head.parameters()]
    result = train(head, data, COEFFS, TrainConfig(epochs=0, seed=0))
    after = [p["weight_mean"] for p in head.parameters()]
    assert result.trajectory == []
    for b, a in zip(before, after):
        np.testing.assert_array_equal(b, a)


def test_same_seed_bitwise_identical_trajectory(rng):
    data = separable_batch(rng, n=120)
    trajectories = []
    for _ in range(2):
        head = DetectionHead(in_dim=3, hidden=(8,), seed=4)
        result = train(head, data, COEFFS, TrainConfig(epochs=10, seed=9))
        trajectories.append(result.trajectory)
    assert trajectories[0] == trajectories[1]


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_divergence_detected(rng):
    data = separable_batch(rng, n=50)
    data.features *= 1e6
    head = DetectionHead(in_dim=3, hidden=(8,), seed=0)
    head.feature_std[:] = 1.0  # defeat standardization to provoke overflow
    config = TrainConfig(epochs=50, learning_rate=1e9, grad_clip=0.0, seed=0)
    with pytest.raises(DivergenceDetected) as err:
        train(head, data, COEFFS, config)
    assert isinstance(err.value.trajectory, list)


def test_checkpoint_roundtrip(tmp_path, rng):
    data = separable_batch(rng, n=80)
    head = DetectionHead(in_dim=3, hidden=(8,), seed=2)
    train(head, data, COEFFS, TrainConfig(epochs=3, seed=0))
    path = tmp_path / "head.npz"
    head.save(path)
    loaded = DetectionHead.load(path)
    p1, _v1, b1 = head.predict(data.features)
    p2, _v2, b2 = loaded.predict(data.features)
    np.testing.assert_array_equal(p1, p2)
    np.testing.assert_array_equal(b1, b2)


def test_trajectory_file(tmp_path, rng):
    data = separable_batch(rng, n=60)
    head = DetectionHead(in_dim=3, hidden=(8,), seed=2)
    result = train(head, data, COEFFS, TrainConfig(epochs=4, seed=0))
    out = tmp_path / "trajectory.csv"
    result.save_trajectory(out)
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "epoch,loss"
    assert len(lines) == 5
