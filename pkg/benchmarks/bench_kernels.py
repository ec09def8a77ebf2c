"""Benchmark the JIT-compiled kernels against the plain interpreter bodies.

Run:  python benchmarks/bench_kernels.py
The same comparison can be forced package-wide with DEID_NO_NUMBA=1.
"""

import time

import numpy as np

from deid import _kernels


def _time(fn, *args, repeat=5, warmup=1):
    for _ in range(warmup):
        fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_levenshtein(rng):
    a = rng.integers(65, 91, size=64).astype(np.uint32)
    b = rng.integers(65, 91, size=64).astype(np.uint32)

    def many(fn):
        def run(x, y):
            for _ in range(200):
                fn(x, y)
        return run

    return (_time(many(_kernels.levenshtein_codes), a, b),
            _time(many(_kernels.PY_IMPLS["levenshtein_codes"]), a, b))


def bench_label_components(rng):
    mask = (rng.random((512, 512)) < 0.25).astype(np.uint8)
    return (_time(_kernels.label_components, mask),
            _time(_kernels.PY_IMPLS["label_components"], mask))


def bench_pairwise_iou(rng):
    boxes = np.column_stack([rng.uniform(10, 500, 400), rng.uniform(10, 500, 400),
                             rng.uniform(2, 60, 400), rng.uniform(2, 60, 400)])
    return (_time(_kernels.pairwise_iou, boxes, boxes),
            _time(_kernels.PY_IMPLS["pairwise_iou"], boxes, boxes))


def bench_box_fill_stats(rng):
    mask = (rng.random((512, 512)) < 0.3).astype(np.uint8)

    def many(fn):
        def run(m):
            for _ in range(50):
                fn(m, 10, 10, 500, 500)
        return run

    return (_time(many(_kernels.box_fill_stats), mask),
            _time(many(_kernels.PY_IMPLS["box_fill_stats"]), mask))


def main():
    if not _kernels.USE_NUMBA:
        print("numba disabled or unavailable; both columns run the fallback")
    _kernels.warmup()
    rng = np.random.default_rng(0)
    rows = [
        ("levenshtein_codes (64x64, x200)", bench_levenshtein(rng)),
        ("label_components (512x512)", bench_label_components(rng)),
        ("pairwise_iou (400x400)", bench_pairwise_iou(rng)),
        ("box_fill_stats (490x490, x50)", bench_box_fill_stats(rng)),
    ]
    print(f"{'kernel':36} {'jit':>10} {'python':>10} {'speedup':>9}")
    for name, (jit, py) in rows:
        print(f"{name:36} {jit*1e3:9.2f}ms {py*1e3:9.2f}ms {py/jit:8.1f}x")


if __name__ == "__main__":
    main()
