"""Gaussian-process Bayesian optimization of the loss coefficients."""

from .acquisition import expected_improvement, suggest
from .gp import DegenerateObservations, Surrogate, fit
from .sweep import (
    FAILURE_SENTINEL,
    INITIAL_DESIGN,
    Observation,
    Param,
    ParamSpace,
    SweepResult,
    run_sweep,
)

__all__ = [
    "DegenerateObservations",
    "FAILURE_SENTINEL",
    "INITIAL_DESIGN",
    "Observation",
    "Param",
    "ParamSpace",
    "Surrogate",
    "SweepResult",
    "expected_improvement",
    "fit",
    "run_sweep",
    "suggest",
]
