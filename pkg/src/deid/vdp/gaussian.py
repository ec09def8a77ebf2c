"""Gaussian moment containers for density propagation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ShapeMismatch(Exception):
    pass


class SingularCovariance(Exception):
    pass


class DivergenceDetected(Exception):
    def __init__(self, message: str, trajectory: list[float]):
        super().__init__(message)
        self.trajectory = trajectory


@dataclass(frozen=True)
class GaussianVector:
    """Elementwise mean and variance (diagonal-covariance contract)."""

    mean: np.ndarray
    var: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        var = np.asarray(self.var, dtype=np.float64)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "var", var)
        if mean.shape != var.shape:
            raise ShapeMismatch(f"mean {mean.shape} vs var {var.shape}")
        if np.any(var < 0):
            raise ShapeMismatch("negative variance")

    @property
    def dim(self) -> int:
        return int(self.mean.shape[-1])


_PSD_TOL = 1e-8


@dataclass(frozen=True)
class FullCovGaussian:
    """Mean vector with a full covariance matrix."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        cov = np.asarray(self.cov, dtype=np.float64)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        k = mean.shape[0]
        if cov.shape != (k, k):
            raise ShapeMismatch(f"cov {cov.shape} vs mean dim {k}")
        if not np.allclose(cov, cov.T, atol=_PSD_TOL):
            raise ShapeMismatch("covariance not symmetric")
        eigmin = float(np.linalg.eigvalsh(cov).min()) if k else 0.0
        if eigmin < -_PSD_TOL:
            raise ShapeMismatch(f"covariance not PSD (min eig {eigmin:.3e})")

    @property
    def dim(self) -> int:
        return int(self.mean.shape[0])

    def diagonal(self) -> GaussianVector:
        return GaussianVector(self.mean, np.clip(np.diag(self.cov), 0.0, None))
