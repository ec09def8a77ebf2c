"""End-to-end detector evaluation: mAP, noise sweep, thresholds, objective."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..detector.boxes import iou
from ..detector.classify import Detection
from ..detector.model import TextDetector, collect_detections
from ..detector.routing import nms, normalize_variance
from ..synth.corpus import Burn, CorpusSpec, generate_corpus
from ..synth.noise import NoiseSpec, SNR_LADDER, add_salt_pepper
from .mapscore import MapReport, ScoredBox, TruthBox, map_at
from .objective import ObjectiveWeights, objective, s_noise_from_slope
from .sweep import mean_uncertainty, noise_slope, pooled_variance, v_clean
from .thresholds import QuadrantReport, UncertaintyPoint, iou_threshold, quadrants


@dataclass
class EvaluationReport:
    map_report: MapReport
    iou_thresh: float
    quadrant: QuadrantReport
    sweep_mean_uncertainty: dict[float, float] = field(default_factory=dict)
    sweep_slope: float = 0.0
    sweep_v_clean: float = 0.0
    noisy_pooled_variance: float = 0.0
    psi: float = 0.0
    nv_low: float = 0.0
    nv_high: float = 1.0

    def to_dict(self) -> dict:
        return {
            "map50": self.map_report.map50,
            "map75": self.map_report.map75,
            "map50_95": self.map_report.map50_95,
            "iou_thresh": self.iou_thresh,
            "fnr": self.quadrant.fnr,
            "quadrants": {"tp": self.quadrant.tp, "fn": self.quadrant.fn,
                          "tn": self.quadrant.tn, "fp": self.quadrant.fp},
            "sweep_mean_uncertainty": {str(k): v for k, v in self.sweep_mean_uncertainty.items()},
            "sweep_slope": self.sweep_slope,
            "sweep_v_clean": self.sweep_v_clean,
            "noisy_pooled_variance": self.noisy_pooled_variance,
            "psi": self.psi,
            "nv_low": self.nv_low,
            "nv_high": self.nv_high,
        }


def detections_to_scored(per_image: dict[str, list[Detection]]) -> list[ScoredBox]:
    out = []
    for image_id, dets in per_image.items():
        for d in dets:
            cls = d.argmax_class
            if cls == 0:
                continue
            out.append(ScoredBox(image_id, d.box, cls, float(d.class_mean[cls])))
    return out


def truths_to_eval(per_image: dict[str, list[Burn]]) -> list[TruthBox]:
    out = []
    for image_id, burns in per_image.items():
        for b in burns:
            out.append(TruthBox(image_id, b.box, 2 if b.is_phi else 1))
    return out


def uncertainty_points(
    per_image: dict[str, list[Detection]],
    truths: dict[str, list[Burn]],
) -> list[UncertaintyPoint]:
    """Each non-background detection becomes (NV, best IoU vs truth)."""
    points = []
    for image_id, dets in per_image.items():
        boxes = [b.box for b in truths.get(image_id, [])]
        for d in dets:
            if d.is_background:
                continue
            best = max((iou(d.box, tb) for tb in boxes), default=0.0)
            points.append(UncertaintyPoint(nv=d.normalized_var, iou=best))
    return points


def run_noise_sweep(
    detector: TextDetector,
    spec: CorpusSpec,
    split: str = "val",
    max_images: int = 100,
    rungs: tuple = SNR_LADDER,
    seed: int = 0,
) -> tuple[dict[float, float], dict[float, np.ndarray]]:
    """Evaluate NV across the SNR ladder; normalization pools the whole sweep
    so rungs stay comparable."""
    images = []
    for image in generate_corpus(spec, split=split):
        images.append(image)
        if len(images) >= max_images:
            break

    raw_by_rung: dict[float, list[Detection]] = {float(s): [] for s in rungs}
    for image in images:
        for s in rungs:
            rng = np.random.default_rng(np.random.SeedSequence((seed, int(s), image.seed_index)))
            frame, _rho = add_salt_pepper(image.frame, NoiseSpec(s), rng)
            dets = detector.detect_raw(frame, f"{image.image_id}@{s}")
            raw_by_rung[float(s)].extend(dets)

    pooled = [d for dets in raw_by_rung.values() for d in dets]
    normalized = normalize_variance(pooled)
    cursor = 0
    mean_u: dict[float, float] = {}
    populations: dict[float, np.ndarray] = {}
    for s in rungs:
        n = len(raw_by_rung[float(s)])
        rung_dets = normalized[cursor:cursor + n]
        cursor += n
        rung_dets = [d for d in nms_per_image(rung_dets, detector.nms_iou) if not d.is_background]
        by_image: dict[str, list[float]] = {}
        for d in rung_dets:
            by_image.setdefault(d.image_id, []).append(d.normalized_var)
        mean_u[float(s)] = mean_uncertainty(by_image)
        populations[float(s)] = np.array(
            [nv for values in by_image.values() for nv in values]
        )
    return mean_u, populations


def nms_per_image(dets: list[Detection], iou_cut: float) -> list[Detection]:
    by_image: dict[str, list[Detection]] = {}
    for d in dets:
        by_image.setdefault(d.image_id, []).append(d)
    out: list[Detection] = []
    for dets_i in by_image.values():
        out.extend(nms(dets_i, iou_cut))
    return out


def evaluate_detector(
    detector: TextDetector,
    spec: CorpusSpec,
    weights: ObjectiveWeights = ObjectiveWeights(),
    eval_split: str = "val",
    sweep_images: int = 60,
    sweep_rungs: tuple = SNR_LADDER,
    sweep_seed: int = 0,
    run_sweep: bool = True,
) -> EvaluationReport:
    """Full evaluation; also computes the NV calibration for the detector."""
    per_image, truths = collect_detections(detector, spec, eval_split)

    # Calibration range from this batch's raw uncertainties (pre-NMS range
    # matches collect_detections' normalization population).
    raw_values = [d.raw_uncertainty for dets in per_image.values() for d in dets]
    nv_low = float(min(raw_values)) if raw_values else 0.0
    nv_high = float(max(raw_values)) if raw_values else 1.0

    scored = detections_to_scored(per_image)
    truth_boxes = truths_to_eval(truths)
    report = map_at(scored, truth_boxes, (0.5, 0.75))

    points = uncertainty_points(per_image, truths)
    thresh = iou_threshold(points) if points else 1.0
    quad = quadrants(points, thresh)

    out = EvaluationReport(
        map_report=report,
        iou_thresh=thresh,
        quadrant=quad,
        nv_low=nv_low,
        nv_high=nv_high,
    )

    if run_sweep and sweep_images > 0:
        mean_u, populations = run_noise_sweep(
            detector, spec, split=eval_split, max_images=sweep_images,
            rungs=sweep_rungs, seed=sweep_seed,
        )
        usable = {s: v for s, v in mean_u.items() if np.isfinite(v)}
        out.sweep_mean_uncertainty = mean_u
        if len(usable) >= 2:
            out.sweep_slope = noise_slope(usable)
        out.sweep_v_clean = v_clean(populations)
        out.noisy_pooled_variance = pooled_variance(
            populations, [s for s in populations if s <= 12])
    out.psi = objective(
        report.map50,
        s_noise_from_slope(out.sweep_slope),
        out.sweep_v_clean,
        quad.fnr,
        thresh,
        weights,
    )
    return out


def calibrate_detector(detector: TextDetector, report: EvaluationReport) -> TextDetector:
    """Stamp the NV range and routing threshold from an evaluation."""
    detector.nv_low = report.nv_low
    detector.nv_high = report.nv_high
    detector.nv_threshold = report.iou_thresh
    return detector


def dump_detections(path, per_image: dict[str, list[Detection]],
                    threshold: float) -> int:
    """Write detection records (box, class moments, NV, route) as JSONL."""
    import json

    from ..detector.routing import route

    count = 0
    with open(path, "w") as fh:
        for dets in per_image.values():
            for det in dets:
                record = det.to_dict()
                record["route"] = route(det, threshold).value
                fh.write(json.dumps(record) + "\n")
                count += 1
    return count


def dump_truths(path, truths: dict[str, list[Burn]]) -> int:
    import json

    count = 0
    with open(path, "w") as fh:
        for image_id, burns in truths.items():
            fh.write(json.dumps({
                "image_id": image_id,
                "burns": [b.to_dict() for b in burns],
            }) + "\n")
            count += 1
    return count
