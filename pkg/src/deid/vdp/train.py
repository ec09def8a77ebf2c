"""SGD training loop for the detection head."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gaussian import DivergenceDetected
from .head import DetectionHead
from .losses import Batch, LossCoefficients


@dataclass
class TrainConfig:
    epochs: int = 40
    learning_rate: float = 0.1
    batch_size: int = 64
    grad_clip: float = 5.0
    seed: int = 0


@dataclass
class TrainResult:
    head: DetectionHead
    trajectory: list[float] = field(default_factory=list)

    def save_trajectory(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("epoch,loss\n")
            for i, loss in enumerate(self.trajectory):
                fh.write(f"{i},{loss:.10g}\n")


def _clip_grads(grads: list[dict[str, np.ndarray]], max_norm: float) -> None:
    if max_norm <= 0 or not math.isfinite(max_norm):
        return
    total = 0.0
    for layer in grads:
        for g in layer.values():
            total += float(np.sum(g * g))
    norm = math.sqrt(total)
    if norm > max_norm:
        scale = max_norm / norm
        for layer in grads:
            for key in layer:
                layer[key] = layer[key] * scale


def train(
    head: DetectionHead,
    data: Batch,
    coeffs: LossCoefficients,
    config: TrainConfig,
) -> TrainResult:
    """Train in place with seeded shuffling; deterministic per seed.

    Raises DivergenceDetected (carrying the partial trajectory) when the loss
    goes NaN or infinite.
    """
    rng = np.random.default_rng(config.seed)
    n = data.size
    trajectory: list[float] = []
    for _epoch in range(config.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        batches = 0
        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            batch = Batch(
                data.features[idx], data.labels[idx],
                data.box_targets[idx], data.positive[idx],
            )
            loss, grads = head.loss_and_grads(batch, coeffs)
            if not math.isfinite(loss):
                raise DivergenceDetected(f"loss {loss} at epoch {_epoch}", trajectory)
            _clip_grads(grads, config.grad_clip)
            head.apply_update(grads, config.learning_rate)
            epoch_loss += loss
            batches += 1
        trajectory.append(epoch_loss / max(batches, 1))
    return TrainResult(head, trajectory)
