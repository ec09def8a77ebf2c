"""Command line interface.

Exit codes: 0 success, 1 partial failures, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path


def _config_from_args(args) -> "JobConfig":
    from .pipeline.config import JobConfig

    if args.config:
        config = JobConfig.load(args.config)
    else:
        config = JobConfig()
    for name in ("output_dir", "data_dir", "detector_checkpoint",
                 "nv_threshold", "parallelism"):
        value = getattr(args, name.replace("-", "_"), None)
        if value is not None:
            setattr(config, name, value)
    return config


def cmd_run(args) -> int:
    from .pipeline.config import ConfigError
    from .pipeline.deid import run_batch

    try:
        config = _config_from_args(args)
        config.validate_paths()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    summary = run_batch(args.input_dir, config)
    print(json.dumps(summary.to_dict(), indent=2))
    if summary.compliance is not None:
        print(summary.compliance.format_table())
    return 1 if summary.failed else 0


def cmd_train(args) -> int:
    from .detector.model import train_detector
    from .evals.harness import calibrate_detector, evaluate_detector
    from .synth.corpus import CorpusSpec
    from .vdp.losses import default_coefficients, default_sweep_settings
    from .vdp.train import TrainConfig

    counts = tuple(int(v) for v in args.counts.split(","))
    spec = CorpusSpec(counts=counts, seed=args.seed)
    coeffs = default_coefficients()
    grad_clip = args.grad_clip
    if grad_clip is None:
        grad_clip = float(default_sweep_settings().get("grad_clip", 5.0))
    if args.coeffs:
        from .vdp.losses import LossCoefficients
        doc = json.loads(Path(args.coeffs).read_text())
        coeffs = LossCoefficients.from_dict(doc)
        grad_clip = float(doc.get("grad_clip", grad_clip))
    config = TrainConfig(epochs=args.epochs, seed=args.seed,
                         learning_rate=args.learning_rate, grad_clip=grad_clip)
    detector, result = train_detector(spec, coeffs, config)
    report = evaluate_detector(detector, spec, sweep_images=args.sweep_images)
    calibrate_detector(detector, report)
    detector.save(args.out)
    print(json.dumps({"checkpoint": args.out, "final_loss": result.trajectory[-1],
                      **report.to_dict()}, indent=2))
    return 0


def cmd_sweep(args) -> int:
    from .evals.objective import ObjectiveWeights
    from .hpo.desk import default_space, make_desk_evaluator
    from .hpo.sweep import ParamSpace, run_sweep
    from .synth.corpus import CorpusSpec

    space = ParamSpace.from_json(args.space) if args.space else default_space()
    counts = tuple(int(v) for v in args.counts.split(","))
    spec = CorpusSpec(counts=counts, seed=args.seed)
    evaluator = make_desk_evaluator(spec, ObjectiveWeights(), epochs=args.epochs)
    result = run_sweep(space, args.budget, evaluator, seed=args.seed,
                       history_path=args.history)
    print(json.dumps({"best_psi": result.best_psi, "best_theta": result.best_theta,
                      "evaluations": len(result.history)}, indent=2))
    if args.out:
        Path(args.out).write_text(json.dumps(result.best_theta, indent=2) + "\n")
    return 0


def cmd_gen(args) -> int:
    if args.what == "corpus":
        from .synth.corpus import CorpusSpec, write_corpus

        counts = tuple(int(v) for v in args.counts.split(","))
        spec = CorpusSpec(counts=counts, seed=args.seed,
                          phi_fraction=args.phi_fraction)
        count, sidecar = write_corpus(args.out, spec, split=args.split)
        print(json.dumps({"files": count, "sidecar": str(sidecar)}))
    elif args.what == "notes":
        from .ner.notes import generate_note

        out = Path(args.out)
        with open(out, "w") as fh:
            for seed in range(args.count):
                note = generate_note(args.seed + seed)
                fh.write(json.dumps({
                    "seed": note.seed,
                    "text": note.text,
                    "spans": [{"label": s.label.value, "start": s.start, "end": s.end}
                              for s in note.spans],
                }) + "\n")
        print(json.dumps({"notes": args.count, "path": str(out)}))
    else:  # metadata
        from .dicomio import serialize
        from .ner.synthmeta import generate_metadata

        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        truth_path = out / "metadata_truth.jsonl"
        with open(truth_path, "w") as fh:
            for seed in range(args.count):
                ds, truth = generate_metadata(args.seed + seed)
                (out / f"meta{seed:06d}.dcm").write_bytes(serialize(ds))
                fh.write(json.dumps({
                    "seed": args.seed + seed,
                    "truth": [[[t.group, t.element], label.value, value]
                              for t, label, value in truth],
                }) + "\n")
        print(json.dumps({"files": args.count, "truth": str(truth_path)}))
    return 0


def cmd_eval(args) -> int:
    from .detector.classify import Detection
    from .evals.harness import detections_to_scored, truths_to_eval, uncertainty_points
    from .evals.mapscore import map_at
    from .evals.thresholds import iou_threshold, quadrants
    from .synth.corpus import Burn

    per_image: dict[str, list[Detection]] = {}
    with open(args.pred) as fh:
        for line in fh:
            if line.strip():
                det = Detection.from_dict(json.loads(line))
                per_image.setdefault(det.image_id, []).append(det)
    truths: dict[str, list[Burn]] = {}
    with open(args.truth) as fh:
        for line in fh:
            if line.strip():
                record = json.loads(line)
                truths[record["image_id"]] = [Burn.from_dict(b) for b in record["burns"]]

    report = map_at(detections_to_scored(per_image), truths_to_eval(truths), (0.5, 0.75))
    points = uncertainty_points(per_image, truths)
    thresh = iou_threshold(points) if points else 1.0
    quad = quadrants(points, thresh)
    print(json.dumps({
        "map50": report.map50, "map75": report.map75,
        "iou_thresh": thresh, "fnr": quad.fnr,
        "quadrants": {"tp": quad.tp, "fn": quad.fn, "tn": quad.tn, "fp": quad.fp},
    }, indent=2))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .pipeline.config import ConfigError
    from .pipeline.deid import PipelineRuntime
    from .pipeline.server import create_app
    from .synth.corpus import load_sidecar

    try:
        config = _config_from_args(args)
        config.validate_paths()
        sidecar = None
        if args.sidecar:
            sidecar = load_sidecar(args.sidecar)
        runtime = PipelineRuntime.build(config, sidecar)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    app = create_app(runtime, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deid",
                                     description="Uncertainty-aware DICOM de-identification")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="de-identify a directory of DICOM files")
    p_run.add_argument("input_dir")
    p_run.add_argument("--config", default=None)
    p_run.add_argument("--output-dir", dest="output_dir", default=None)
    p_run.add_argument("--data-dir", dest="data_dir", default=None)
    p_run.add_argument("--detector", dest="detector_checkpoint", default=None)
    p_run.add_argument("--nv-threshold", dest="nv_threshold", type=float, default=None)
    p_run.add_argument("--parallelism", type=int, default=None)
    p_run.set_defaults(func=cmd_run)

    p_train = sub.add_parser("train", help="train a detector checkpoint")
    p_train.add_argument("--out", required=True)
    p_train.add_argument("--counts", default="600,120,120")
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--epochs", type=int, default=40)
    p_train.add_argument("--learning-rate", type=float, default=0.1)
    p_train.add_argument("--grad-clip", type=float, default=None,
                         help="default: the committed sweep result")
    p_train.add_argument("--coeffs", default=None, help="JSON file of loss coefficients")
    p_train.add_argument("--sweep-images", type=int, default=40)
    p_train.set_defaults(func=cmd_train)

    p_sweep = sub.add_parser("sweep", help="Bayesian sweep of the loss coefficients")
    p_sweep.add_argument("--space", default=None, help="parameter space JSON")
    p_sweep.add_argument("--budget", type=int, required=True)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--counts", default="200,60,60")
    p_sweep.add_argument("--epochs", type=int, default=25)
    p_sweep.add_argument("--history", default=None, help="JSONL history (resumable)")
    p_sweep.add_argument("--out", default=None, help="write best coefficients JSON here")
    p_sweep.set_defaults(func=cmd_sweep)

    p_gen = sub.add_parser("gen", help="generate synthetic data")
    p_gen.add_argument("what", choices=("corpus", "notes", "metadata"))
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--count", type=int, default=100)
    p_gen.add_argument("--counts", default="80,10,10")
    p_gen.add_argument("--phi-fraction", type=float, default=0.5)
    p_gen.add_argument("--split", default=None)
    p_gen.set_defaults(func=cmd_gen)

    p_eval = sub.add_parser("eval", help="score detection dumps against ground truth")
    p_eval.add_argument("--pred", required=True)
    p_eval.add_argument("--truth", required=True)
    p_eval.set_defaults(func=cmd_eval)

    p_serve = sub.add_parser("serve", help="run the review API")
    p_serve.add_argument("--port", type=int, default=8008)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--config", default=None)
    p_serve.add_argument("--data-dir", dest="data_dir", default=None)
    p_serve.add_argument("--sidecar", default=None)
    p_serve.add_argument("--ui", default=None,
                         help="serve the built frontend directory at /ui")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
