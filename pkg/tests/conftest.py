import numpy as np
import pytest

from deid.detector import train_detector
from deid.evals.harness import calibrate_detector, evaluate_detector
from deid.synth import CorpusSpec, write_corpus
from deid.vdp import LossCoefficients, TrainConfig

SMALL_SPEC = CorpusSpec(counts=(600, 120, 120), seed=41)
SMALL_COEFFS = LossCoefficients(
    lambda_reg=1.0, lambda_error_over_sigma=1.0, lambda_logdet=0.01,
    lambda_kl_trace=1e-4, lambda_kl_mean=1e-4, lambda_kl_logdet=1e-4,
)


@pytest.fixture(scope="session")
def small_detector():
    """Detector trained on the small corpus; calibrated on its val split."""
    detector, _result = train_detector(SMALL_SPEC, SMALL_COEFFS,
                                       TrainConfig(epochs=40, seed=0))
    report = evaluate_detector(detector, SMALL_SPEC, run_sweep=False)
    calibrate_detector(detector, report)
    return detector


@pytest.fixture(scope="session")
def small_spec():
    return SMALL_SPEC


@pytest.fixture(scope="session")
def smoke_corpus(tmp_path_factory):
    """The 100-file on-disk smoke corpus with its sidecar."""
    directory = tmp_path_factory.mktemp("smoke_corpus")
    spec = CorpusSpec(counts=(100, 1, 1), seed=77)
    count, sidecar = write_corpus(directory, spec, split="train")
    assert count == 100
    return directory


@pytest.fixture(scope="session")
def checkpoint_path(small_detector, tmp_path_factory):
    path = tmp_path_factory.mktemp("ckpt") / "detector.npz"
    small_detector.save(path)
    return path


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
