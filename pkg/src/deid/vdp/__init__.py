"""Analytic Gaussian moment propagation through the decision head:
means and variances flow through every layer instead of sampled weights,
with the matching losses and SGD training loop."""

from .gaussian import (
    DivergenceDetected,
    FullCovGaussian,
    GaussianVector,
    ShapeMismatch,
    SingularCovariance,
)
from .head import DetectionHead, FeatureDimensionMismatch, N_BOX, N_CLASSES
from .layers import (
    GaussianLinearLayer,
    VAR_FLOOR,
    linear_propagate_diag,
    linear_propagate_full,
    relu_propagate,
    softmax,
    softmax_moments,
)
from .losses import (
    Batch,
    LossCoefficients,
    kl_exact,
    kl_layer_loss,
    nll_variance_only,
    smooth_l1,
)
from .train import TrainConfig, TrainResult, train

__all__ = [
    "Batch",
    "DetectionHead",
    "DivergenceDetected",
    "FeatureDimensionMismatch",
    "FullCovGaussian",
    "GaussianLinearLayer",
    "GaussianVector",
    "LossCoefficients",
    "N_BOX",
    "N_CLASSES",
    "ShapeMismatch",
    "SingularCovariance",
    "TrainConfig",
    "TrainResult",
    "VAR_FLOOR",
    "kl_exact",
    "kl_layer_loss",
    "linear_propagate_diag",
    "linear_propagate_full",
    "nll_variance_only",
    "relu_propagate",
    "smooth_l1",
    "softmax",
    "softmax_moments",
    "train",
]
