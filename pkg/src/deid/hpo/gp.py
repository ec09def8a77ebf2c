"""Gaussian-process surrogate over the hyperparameter unit cube."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.optimize import minimize


class DegenerateObservations(Exception):
    pass


def _sq_dists(a: np.ndarray, b: np.ndarray, lengthscales: np.ndarray) -> np.ndarray:
    sa = a / lengthscales
    sb = b / lengthscales
    return ((sa[:, None, :] - sb[None, :, :]) ** 2).sum(axis=2)


def _kernel(a: np.ndarray, b: np.ndarray, lengthscales: np.ndarray,
            signal_var: float) -> np.ndarray:
    return signal_var * np.exp(-0.5 * _sq_dists(a, b, lengthscales))


@dataclass
class Surrogate:
    """Squared-exponential GP with per-dimension length-scales.

    Trains on unit-cube inputs and standardized outputs; predictions are
    returned in the raw output scale.
    """

    x: np.ndarray
    y_raw: np.ndarray
    lengthscales: np.ndarray
    signal_var: float
    noise_var: float
    y_mean: float
    y_std: float
    degenerate: bool = False
    _chol: tuple = field(default=None, repr=False)
    _alpha: np.ndarray = field(default=None, repr=False)

    def predict(self, x_new: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        x_new = np.atleast_2d(x_new)
        if self.degenerate:
            return (np.full(len(x_new), self.y_mean),
                    np.full(len(x_new), max(self.y_std, 1.0) ** 2))
        k_star = _kernel(x_new, self.x, self.lengthscales, self.signal_var)
        mean_std = k_star @ self._alpha
        v = cho_solve(self._chol, k_star.T)
        var_std = self.signal_var - np.einsum("nm,mn->n", k_star, v)
        var_std = np.clip(var_std, 0.0, None)
        return mean_std * self.y_std + self.y_mean, var_std * (self.y_std ** 2)


def _nlml(params: np.ndarray, x: np.ndarray, y: np.ndarray,
          fixed_noise: float | None = None) -> float:
    d = x.shape[1]
    lengthscales = np.exp(params[:d])
    signal_var = np.exp(params[d]) ** 2
    noise_var = fixed_noise if fixed_noise is not None else np.exp(params[d + 1]) ** 2
    k = _kernel(x, x, lengthscales, signal_var)
    k[np.diag_indices_from(k)] += noise_var + 1e-8
    try:
        chol = cho_factor(k, lower=True)
    except np.linalg.LinAlgError:
        return 1e12
    alpha = cho_solve(chol, y)
    logdet = 2.0 * float(np.sum(np.log(np.diag(chol[0]))))
    return float(0.5 * y @ alpha + 0.5 * logdet + 0.5 * len(y) * np.log(2 * np.pi))


def fit(observations: list[tuple[np.ndarray, float]], seed: int = 0,
        fixed_noise: float | None = None) -> Surrogate:
    """Kernel hyperparameters by multi-start marginal-likelihood ascent.

    All-identical outputs fall back to a prior surrogate rather than a
    zero-variance degenerate fit.
    """
    if not observations:
        raise ValueError("no observations")
    # Canonical order makes the fit (and its float arithmetic) independent
    # of the order observations arrived in.
    ordered = sorted(observations, key=lambda o: (tuple(np.asarray(o[0], float)), o[1]))
    x = np.atleast_2d(np.stack([np.asarray(t, dtype=np.float64) for t, _ in ordered]))
    y_raw = np.array([p for _, p in ordered], dtype=np.float64)
    y_mean, y_std = float(y_raw.mean()), float(y_raw.std())

    if y_std < 1e-12:
        return Surrogate(x, y_raw, np.ones(x.shape[1]), 1.0, 1e-6,
                         y_mean, 1.0, degenerate=True)

    y = (y_raw - y_mean) / y_std
    d = x.shape[1]
    rng = np.random.default_rng(seed)
    n_hyper = d + 1 if fixed_noise is not None else d + 2
    starts = [np.concatenate([np.zeros(d), [0.0], [np.log(0.1)]])[:n_hyper]]
    for _ in range(3):
        starts.append(np.concatenate([
            rng.uniform(np.log(0.1), np.log(2.0), size=d),
            [rng.uniform(np.log(0.3), np.log(3.0))],
            [rng.uniform(np.log(1e-4), np.log(0.3))],
        ])[:n_hyper])
    bounds = [(np.log(0.03), np.log(20.0))] * d + [(np.log(0.05), np.log(10.0))]
    if fixed_noise is None:
        bounds = bounds + [(np.log(1e-6), np.log(1.0))]

    best_params, best_val = None, np.inf
    for start in starts:
        res = minimize(_nlml, start, args=(x, y, fixed_noise),
                       method="L-BFGS-B", bounds=bounds)
        if res.fun < best_val:
            best_val, best_params = res.fun, res.x

    lengthscales = np.exp(best_params[:d])
    signal_var = float(np.exp(best_params[d]) ** 2)
    noise_var = fixed_noise if fixed_noise is not None else float(np.exp(best_params[d + 1]) ** 2)

    k = _kernel(x, x, lengthscales, signal_var)
    jitter = 1e-8
    while True:
        try:
            chol = cho_factor(k + np.eye(len(x)) * (noise_var + jitter), lower=True)
            break
        except np.linalg.LinAlgError:
            jitter *= 10.0
            if jitter > 1.0:
                raise
    alpha = cho_solve(chol, y)
    surrogate = Surrogate(x, y_raw, lengthscales, signal_var, noise_var, y_mean, y_std)
    surrogate._chol = chol
    surrogate._alpha = alpha
    return surrogate
