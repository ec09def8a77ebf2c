"""Noise-sweep statistics: mean uncertainty per rung, slope, clean variance."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

CLEAN_CUTOFF_SNR = 30.0


class NoCleanRungs(Exception):
    pass


@dataclass
class SweepReport:
    mean_uncertainty: dict[float, float]          # snr -> M_uncert
    nv_populations: dict[float, np.ndarray] = field(default_factory=dict)
    noise_slope: float = 0.0
    v_clean: float = 0.0


def mean_uncertainty(nv_by_image: dict[str, list[float]]) -> float:
    """Two-level average: mean over images of the per-image mean NV.

    Images with zero detections are excluded from the outer mean.
    """
    per_image = [float(np.mean(values)) for values in nv_by_image.values() if len(values)]
    if not per_image:
        return float("nan")
    return float(np.mean(per_image))


def noise_slope(sweep: dict[float, float]) -> float:
    """Least-squares slope of M_uncert against 1/SNR.

    Positive slope = uncertainty rising as SNR falls (the desired reactance
    direction).
    """
    rungs = sorted(sweep)
    if len(rungs) < 2:
        raise ValueError("noise slope needs at least two rungs")
    x = np.array([1.0 / s for s in rungs])
    y = np.array([sweep[s] for s in rungs])
    x_c = x - x.mean()
    denom = float(np.sum(x_c * x_c))
    if denom == 0.0:
        return 0.0
    return float(np.sum(x_c * (y - y.mean())) / denom)


def v_clean(nv_populations: dict[float, np.ndarray],
            clean_cutoff: float = CLEAN_CUTOFF_SNR) -> float:
    """Mean population variance of NV over rungs with snr > cutoff."""
    clean = [s for s in nv_populations if s > clean_cutoff]
    if not clean:
        raise NoCleanRungs(f"no rungs above snr {clean_cutoff}")
    variances = [float(np.var(np.asarray(nv_populations[s]))) for s in sorted(clean)]
    return float(np.mean(variances))


def pooled_variance(nv_populations: dict[float, np.ndarray],
                    rungs: list[float]) -> float:
    pool = np.concatenate([np.asarray(nv_populations[s]) for s in rungs if s in nv_populations])
    return float(np.var(pool)) if pool.size else 0.0
