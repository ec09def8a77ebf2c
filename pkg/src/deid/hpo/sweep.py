"""The sweep driver: parameter space, persistent history, suggest-evaluate loop."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from scipy.stats import qmc

from .acquisition import suggest
from .gp import fit

INITIAL_DESIGN = 8
FAILURE_SENTINEL = -math.inf


@dataclass(frozen=True)
class Param:
    name: str
    lower: float
    upper: float
    scale: str = "linear"  # "linear" | "log"

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"{self.name}: lower must be below upper")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"{self.name}: unknown scale {self.scale!r}")
        if self.scale == "log" and self.lower <= 0:
            raise ValueError(f"{self.name}: log scale requires positive lower bound")

    def to_unit(self, value: float) -> float:
        if self.scale == "log":
            return (math.log(value) - math.log(self.lower)) / (math.log(self.upper) - math.log(self.lower))
        return (value - self.lower) / (self.upper - self.lower)

    def from_unit(self, unit: float) -> float:
        unit = min(max(unit, 0.0), 1.0)
        if self.scale == "log":
            return math.exp(math.log(self.lower) + unit * (math.log(self.upper) - math.log(self.lower)))
        return self.lower + unit * (self.upper - self.lower)


@dataclass
class ParamSpace:
    params: list[Param]

    @property
    def dim(self) -> int:
        return len(self.params)

    def to_unit(self, values: dict[str, float]) -> np.ndarray:
        return np.array([p.to_unit(values[p.name]) for p in self.params])

    def from_unit(self, unit: np.ndarray) -> dict[str, float]:
        return {p.name: p.from_unit(float(u)) for p, u in zip(self.params, unit)}

    def contains(self, values: dict[str, float]) -> bool:
        return all(p.lower <= values[p.name] <= p.upper for p in self.params)

    @classmethod
    def from_json(cls, path: Path | str) -> "ParamSpace":
        doc = json.loads(Path(path).read_text())
        return cls([Param(e["name"], float(e["lower"]), float(e["upper"]),
                          e.get("scale", "linear")) for e in doc["params"]])

    def to_json(self, path: Path | str) -> None:
        doc = {"params": [
            {"name": p.name, "lower": p.lower, "upper": p.upper, "scale": p.scale}
            for p in self.params
        ]}
        Path(path).write_text(json.dumps(doc, indent=2) + "\n")


@dataclass
class Observation:
    theta: dict[str, float]
    psi: float
    metrics: dict = field(default_factory=dict)

    def to_json(self) -> str:
        psi = self.psi if math.isfinite(self.psi) else None
        return json.dumps({"theta": self.theta, "psi": psi, "metrics": self.metrics})

    @classmethod
    def from_json(cls, line: str) -> "Observation":
        doc = json.loads(line)
        psi = doc["psi"] if doc["psi"] is not None else FAILURE_SENTINEL
        return cls(doc["theta"], psi, doc.get("metrics", {}))


@dataclass
class SweepResult:
    best_theta: dict[str, float]
    best_psi: float
    history: list[Observation]


Evaluator = Callable[[dict[str, float]], tuple[float, dict]]


def run_sweep(
    space: ParamSpace,
    budget: int,
    evaluator: Evaluator,
    seed: int = 0,
    history_path: Optional[Path | str] = None,
) -> SweepResult:
    """Initial quasi-random design, then GP/EI suggestions until budget.

    Evaluator failures are recorded with a -inf sentinel and excluded from
    surrogate fits. History persists as JSONL and the sweep resumes from it.
    """
    if budget < INITIAL_DESIGN:
        raise ValueError(f"budget {budget} below the initial design size {INITIAL_DESIGN}")

    history: list[Observation] = []
    if history_path is not None and Path(history_path).exists():
        with open(history_path) as fh:
            history = [Observation.from_json(line) for line in fh if line.strip()]

    sampler = qmc.Sobol(d=space.dim, scramble=True, seed=seed)
    design = sampler.random(INITIAL_DESIGN)

    def record(obs: Observation) -> None:
        history.append(obs)
        if history_path is not None:
            with open(history_path, "a") as fh:
                fh.write(obs.to_json() + "\n")

    def evaluate(theta: dict[str, float]) -> None:
        try:
            psi, metrics = evaluator(theta)
        except Exception as exc:  # EvaluatorFailure contract
            record(Observation(theta, FAILURE_SENTINEL, {"error": str(exc)}))
            return
        record(Observation(theta, float(psi), metrics))

    while len(history) < min(INITIAL_DESIGN, budget):
        theta = space.from_unit(design[len(history)])
        evaluate(theta)

    while len(history) < budget:
        valid = [(space.to_unit(o.theta), o.psi) for o in history if math.isfinite(o.psi)]
        if not valid:
            # Everything failed so far; keep exploring the design sequence.
            theta = space.from_unit(sampler.random(1)[0])
            evaluate(theta)
            continue
        surrogate = fit(valid, seed=seed)
        psi_best = max(p for _, p in valid)
        theta_unit = suggest(surrogate, space.dim, psi_best,
                             seed=seed + len(history))
        evaluate(space.from_unit(theta_unit))

    finite = [o for o in history if math.isfinite(o.psi)]
    best = max(finite, key=lambda o: o.psi) if finite else history[-1]
    return SweepResult(best.theta, best.psi, history)
