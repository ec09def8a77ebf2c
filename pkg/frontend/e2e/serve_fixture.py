"""Self-contained backend fixture for the UI end-to-end test.

Trains a tiny detector, processes a small corpus with an NV threshold of
zero (so every detection quarantines), then serves the review API. Prints
"READY <port>" once the server is listening.
"""

import socket
import sys
import tempfile
import threading
from pathlib import Path

import uvicorn

from deid.detector import train_detector
from deid.evals.harness import calibrate_detector, evaluate_detector
from deid.pipeline import JobConfig, PipelineRuntime, create_app, deidentify_file
from deid.synth import CorpusSpec, load_sidecar, write_corpus
from deid.vdp import TrainConfig
from deid.vdp.losses import default_coefficients


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def main() -> None:
    work = Path(tempfile.mkdtemp(prefix="deid-e2e-"))
    spec = CorpusSpec(counts=(80, 16, 16), seed=19)
    detector, _ = train_detector(spec, default_coefficients(),
                                 TrainConfig(epochs=12, seed=0))
    report = evaluate_detector(detector, spec, run_sweep=False)
    calibrate_detector(detector, report)
    ckpt = work / "detector.npz"
    detector.save(ckpt)

    corpus = work / "corpus"
    write_corpus(corpus, CorpusSpec(counts=(12, 1, 1), seed=55), split="train")
    sidecar = load_sidecar(corpus / "ground_truth.jsonl")

    config = JobConfig(
        output_dir=str(work / "out"),
        data_dir=str(work / "data"),
        detector_checkpoint=str(ckpt),
        nv_threshold=0.0,
    )
    runtime = PipelineRuntime.build(config, sidecar)
    outcomes = [deidentify_file(path, runtime)
                for path in sorted(corpus.glob("*.dcm"))]
    withheld = sum(1 for o in outcomes if o.status == "withheld")
    print(f"processed {len(outcomes)} files, withheld {withheld}", flush=True)

    app = create_app(runtime)
    port = free_port()
    server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=port,
                                           log_level="error"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    while not server.started:
        pass
    print(f"READY {port}", flush=True)
    try:
        thread.join()
    except KeyboardInterrupt:
        sys.exit(0)


if __name__ == "__main__":
    main()
