"""Desk-scale sweep evaluator: train a small detector, score the objective."""

from __future__ import annotations

from ..evals.harness import evaluate_detector
from ..evals.objective import ObjectiveWeights
from ..detector.model import train_detector
from ..synth.corpus import CorpusSpec
from ..vdp.losses import LossCoefficients
from ..vdp.train import TrainConfig
from .sweep import Param, ParamSpace

COEFF_NAMES = (
    "lambda_reg", "lambda_error_over_sigma", "lambda_logdet",
    "lambda_kl_trace", "lambda_kl_mean", "lambda_kl_logdet",
)


def default_space() -> ParamSpace:
    """Six loss coefficients plus the gradient clip threshold."""
    return ParamSpace([
        Param("lambda_reg", 0.05, 10.0, "log"),
        Param("lambda_error_over_sigma", 0.05, 10.0, "log"),
        Param("lambda_logdet", 1e-4, 1.0, "log"),
        Param("lambda_kl_trace", 1e-6, 1e-1, "log"),
        Param("lambda_kl_mean", 1e-6, 1e-1, "log"),
        Param("lambda_kl_logdet", 1e-6, 1e-1, "log"),
        Param("grad_clip", 0.5, 50.0, "log"),
    ])


def coefficients_from_theta(theta: dict[str, float]) -> LossCoefficients:
    return LossCoefficients(**{k: float(theta[k]) for k in COEFF_NAMES if k in theta})


def make_desk_evaluator(
    spec: CorpusSpec,
    weights: ObjectiveWeights = ObjectiveWeights(),
    epochs: int = 25,
    sweep_images: int = 24,
    train_seed: int = 0,
):
    """Evaluator for run_sweep: theta -> (psi, metrics)."""

    def evaluate(theta: dict[str, float]) -> tuple[float, dict]:
        coeffs = coefficients_from_theta(theta)
        config = TrainConfig(
            epochs=epochs,
            grad_clip=float(theta.get("grad_clip", 5.0)),
            seed=train_seed,
        )
        detector, _result = train_detector(spec, coeffs, config)
        report = evaluate_detector(detector, spec, weights,
                                   sweep_images=sweep_images)
        return report.psi, report.to_dict()

    return evaluate
