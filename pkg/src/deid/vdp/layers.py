"""Moment propagation through linear layers and activations.

Weights are Gaussian with diagonal covariance, parameterized as
softplus(log-variance) + 1e-8 so variances stay strictly positive. The
variance-only linear rule follows the printed form, which drops the
product-of-variances term; `include_cross_term=True` adds it back (that flag
is what the Monte-Carlo agreement checks use, since the cross term belongs in
the exact second moment).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import FullCovGaussian, GaussianVector, ShapeMismatch

VAR_FLOOR = 1e-8


def softplus(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, x)


def softplus_prime(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-x))


@dataclass
class GaussianLinearLayer:
    """y = Wx + b with W ~ N(weight_mean, diag), b ~ N(bias_mean, diag).

    weight_mean is (out, in); the log-variance arrays parameterize strictly
    positive variances via softplus + floor.
    """

    weight_mean: np.ndarray
    weight_logvar: np.ndarray
    bias_mean: np.ndarray
    bias_logvar: np.ndarray

    def __post_init__(self):
        self.weight_mean = np.asarray(self.weight_mean, dtype=np.float64)
        self.weight_logvar = np.asarray(self.weight_logvar, dtype=np.float64)
        self.bias_mean = np.asarray(self.bias_mean, dtype=np.float64)
        self.bias_logvar = np.asarray(self.bias_logvar, dtype=np.float64)
        m, d = self.weight_mean.shape
        if self.weight_logvar.shape != (m, d):
            raise ShapeMismatch("weight_logvar shape mismatch")
        if self.bias_mean.shape != (m,) or self.bias_logvar.shape != (m,):
            raise ShapeMismatch("bias shape mismatch")

    @property
    def out_dim(self) -> int:
        return int(self.weight_mean.shape[0])

    @property
    def in_dim(self) -> int:
        return int(self.weight_mean.shape[1])

    def weight_var(self) -> np.ndarray:
        return softplus(self.weight_logvar) + VAR_FLOOR

    def bias_var(self) -> np.ndarray:
        return softplus(self.bias_logvar) + VAR_FLOOR

    @classmethod
    def initialize(cls, in_dim: int, out_dim: int, rng: np.random.Generator,
                   logvar0: float = -6.0) -> "GaussianLinearLayer":
        scale = 1.0 / np.sqrt(in_dim)
        return cls(
            weight_mean=rng.normal(0.0, scale, size=(out_dim, in_dim)),
            weight_logvar=np.full((out_dim, in_dim), logvar0),
            bias_mean=np.zeros(out_dim),
            bias_logvar=np.full(out_dim, logvar0),
        )


def linear_propagate_diag(
    layer: GaussianLinearLayer,
    x: GaussianVector,
    include_cross_term: bool = False,
) -> GaussianVector:
    """Variance-only propagation through z = Wx + b."""
    if x.dim != layer.in_dim:
        raise ShapeMismatch(f"input dim {x.dim} != layer in_dim {layer.in_dim}")
    wm, wv = layer.weight_mean, layer.weight_var()
    mean = wm @ x.mean + layer.bias_mean
    var = wv @ (x.mean * x.mean) + (wm * wm) @ x.var + layer.bias_var()
    if include_cross_term:
        var = var + wv @ x.var
    return GaussianVector(mean, var)


def linear_propagate_full(layer: GaussianLinearLayer, x: FullCovGaussian) -> FullCovGaussian:
    """Full-covariance propagation: exact second moments of z = Wx + b for
    independent W, x, b with per-row diagonal weight covariance."""
    if x.dim != layer.in_dim:
        raise ShapeMismatch(f"input dim {x.dim} != layer in_dim {layer.in_dim}")
    wm, wv = layer.weight_mean, layer.weight_var()
    mean = wm @ x.mean + layer.bias_mean
    cov = wm @ x.cov @ wm.T
    diag_extra = wv @ (np.diag(x.cov) + x.mean * x.mean) + layer.bias_var()
    cov = cov + np.diag(diag_extra)
    cov = 0.5 * (cov + cov.T)
    return FullCovGaussian(mean, cov)


def relu_propagate(x: GaussianVector) -> GaussianVector:
    """First-order Taylor: mean through f, variance scaled by f'^2."""
    active = x.mean > 0
    return GaussianVector(np.where(active, x.mean, 0.0), np.where(active, x.var, 0.0))


def softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def softmax_jacobian(p: np.ndarray) -> np.ndarray:
    return np.diag(p) - np.outer(p, p)


def softmax_moments(z: GaussianVector) -> GaussianVector:
    """Class-probability moments: softmax mean, Jacobian-squared variance."""
    p = softmax(z.mean)
    jac = softmax_jacobian(p)
    var = (jac * jac) @ z.var
    return GaussianVector(p, var)
