"""Expected improvement and the suggestion step."""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .gp import Surrogate

_SQRT2 = math.sqrt(2.0)


def _phi(z: np.ndarray) -> np.ndarray:
    return np.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)


def _cdf(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.vectorize(math.erf)(z / _SQRT2))


def expected_improvement(surrogate: Surrogate, theta: np.ndarray,
                         psi_best: float) -> np.ndarray:
    """E[max(psi(theta) - psi_best, 0)] under the posterior."""
    mean, var = surrogate.predict(np.atleast_2d(theta))
    std = np.sqrt(var)
    improvement = mean - psi_best
    out = np.where(improvement > 0, improvement, 0.0)
    positive = std > 1e-12
    z = np.zeros_like(mean)
    np.divide(improvement, std, out=z, where=positive)
    ei = improvement * _cdf(z) + std * _phi(z)
    # Far-negative z underflows to tiny negative values; EI is >= 0 exactly.
    return np.maximum(np.where(positive, ei, out), 0.0)


def suggest(surrogate: Surrogate, dim: int, psi_best: float,
            seed: int = 0, n_candidates: int = 1024, n_refine: int = 8) -> np.ndarray:
    """Quasi-random EI search plus local refinement from the best starts."""
    sampler = qmc.Sobol(d=dim, scramble=True, seed=seed)
    candidates = sampler.random(n_candidates)
    ei = expected_improvement(surrogate, candidates, psi_best)
    top = candidates[np.argsort(-ei)[:n_refine]]

    def neg_ei(theta: np.ndarray) -> float:
        return -float(expected_improvement(surrogate, theta[None, :], psi_best)[0])

    best_theta = top[0]
    best_val = -neg_ei(top[0])
    for start in top:
        res = minimize(neg_ei, start, method="L-BFGS-B",
                       bounds=[(0.0, 1.0)] * dim)
        if -res.fun > best_val:
            best_val = -res.fun
            best_theta = np.clip(res.x, 0.0, 1.0)
    return best_theta
