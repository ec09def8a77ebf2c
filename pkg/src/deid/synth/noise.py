"""Salt-and-pepper noise calibrated to a target signal-to-noise ratio.

The corrupted pixel fraction is solved per image so the measured ratio
10*log10(sum(signal^2) / sum((noisy - signal)^2)) lands on the requested
rung: whole pixels flip to the dtype extremes (50/50 salt/pepper) and one
final partial-amplitude pixel absorbs the energy remainder, which keeps even
the near-clean rungs reachable on small images.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SNR_LADDER = (124, 90, 64, 45, 32, 23, 16, 14, 12, 8, 6, 4, 2)
CLEAN_SNR = 124


@dataclass(frozen=True)
class NoiseSpec:
    snr_db: float
    salt_fraction: float = 0.5

    def __post_init__(self):
        if self.snr_db not in SNR_LADDER:
            raise ValueError(f"snr_db {self.snr_db} not on the ladder {SNR_LADDER}")


def measured_snr_db(signal: np.ndarray, noisy: np.ndarray) -> float:
    s = signal.astype(np.float64)
    err = noisy.astype(np.float64) - s
    err_energy = float(np.sum(err * err))
    if err_energy == 0.0:
        return math.inf
    sig_energy = float(np.sum(s * s))
    return 10.0 * math.log10(sig_energy / err_energy)


def add_salt_pepper(
    frame: np.ndarray,
    spec: NoiseSpec,
    rng: np.random.Generator,
) -> tuple[np.ndarray, float]:
    """Returns (noisy copy, corrupted pixel fraction)."""
    if spec.snr_db == CLEAN_SNR:
        return frame.copy(), 0.0

    info = np.iinfo(frame.dtype)
    flat_signal = frame.astype(np.float64).ravel()
    signal_energy = float(np.sum(flat_signal * flat_signal))
    target_energy = signal_energy * 10.0 ** (-spec.snr_db / 10.0)

    # Corrupt to the extremes of the image's own dynamic range (salt pixels
    # then sit at burned-text brightness on windowed content); degenerate
    # flat images fall back to the dtype extremes.
    salt_value = float(frame.max())
    pepper_value = float(frame.min())
    if salt_value == pepper_value:
        salt_value, pepper_value = float(info.max), float(info.min)

    out = frame.copy().ravel()
    order = rng.permutation(out.size)
    salt = rng.random(out.size) < spec.salt_fraction
    values = np.where(salt, salt_value, pepper_value)
    errs = (values[order] - flat_signal[order]) ** 2
    cum = np.cumsum(errs)

    k = int(np.searchsorted(cum, target_energy, side="right"))
    full = order[:k]
    out[full] = values[full].astype(frame.dtype)
    consumed = float(cum[k - 1]) if k > 0 else 0.0
    corrupted = float(np.count_nonzero(errs[:k]))

    remaining = target_energy - consumed
    if remaining > 0.0 and k < out.size:
        # Partial-amplitude pixel lands exactly on the target energy.
        flat_idx = order[k]
        step = math.sqrt(remaining)
        direction = 1.0 if salt[flat_idx] else -1.0
        partial = np.clip(flat_signal[flat_idx] + direction * step, info.min, info.max)
        out[flat_idx] = np.rint(partial)
        corrupted += remaining / errs[k] if errs[k] > 0 else 0.0
    return out.reshape(frame.shape), corrupted / frame.size
