"""The five-component composite objective used by the hyperparameter sweep."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ObjectiveWeights:
    alpha: float = 1.0    # detection quality (mAP50)
    beta: float = 1.0     # noise-slope term
    gamma: float = 1.0    # clean-rung variance
    delta: float = 1.0    # false negative rate at the threshold
    epsilon: float = 1.0  # zero-false-positive uncertainty threshold


def objective(
    map50: float,
    s_noise: float,
    v_clean: float,
    fnr: float,
    iou_thresh: float,
    weights: ObjectiveWeights,
) -> float:
    """alpha*mAP50 - beta*S_noise - gamma*V_clean - delta*FNR + eps*IoU_thresh.

    S_noise here follows the convention where good reactance is negative
    (see `s_noise_from_slope`), so the -beta term rewards it.
    """
    return (
        weights.alpha * map50
        - weights.beta * s_noise
        - weights.gamma * v_clean
        - weights.delta * fnr
        + weights.epsilon * iou_thresh
    )


def s_noise_from_slope(slope_vs_inverse_snr: float) -> float:
    """Adapt the fitted slope to the objective's sign convention.

    The fit reports uncertainty against 1/SNR, where rising-with-noise is a
    positive slope; the objective's -beta term expects good reactance to be
    negative, so the sign flips here.
    """
    return -slope_vs_inverse_snr
