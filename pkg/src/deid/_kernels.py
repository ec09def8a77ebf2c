"""Hot numeric kernels shared across the package.

Each kernel body is written in nopython-compatible Python, so the exact same
function runs either JIT-compiled through numba or as the plain interpreter
fallback. Set DEID_NO_NUMBA=1 to force the fallback path (or simply run
without numba installed). `benchmarks/bench_kernels.py` compares the two.
"""

import os

import numpy as np


def _want_numba() -> bool:
    if os.environ.get("DEID_NO_NUMBA", "") not in ("", "0"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USE_NUMBA = _want_numba()


def _jit(fn):
    if USE_NUMBA:
        from numba import njit

        return njit(cache=False)(fn)
    return fn


def _levenshtein_codes_impl(a, b):
    # Single-row DP over unicode code-point arrays; costs 1/1/1.
    n = a.shape[0]
    m = b.shape[0]
    if n == 0:
        return m
    if m == 0:
        return n
    row = np.empty(m + 1, np.int64)
    for j in range(m + 1):
        row[j] = j
    for i in range(1, n + 1):
        diag = row[0]
        row[0] = i
        for j in range(1, m + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            best = diag + cost
            if row[j] + 1 < best:
                best = row[j] + 1
            if row[j - 1] + 1 < best:
                best = row[j - 1] + 1
            diag = row[j]
            row[j] = best
    return row[m]


def _label_components_impl(mask):
    # Two-pass 8-connectivity labeling with union-find. Returns an int32
    # label image (0 = background, labels 1..count) and the component count.
    h = mask.shape[0]
    w = mask.shape[1]
    labels = np.zeros((h, w), np.int32)
    parent = np.zeros(h * w // 2 + 2, np.int32)
    nprov = 0
    for y in range(h):
        for x in range(w):
            if mask[y, x] == 0:
                continue
            best = 0
            for k in range(4):
                if k == 0:
                    ny, nx = y, x - 1
                elif k == 1:
                    ny, nx = y - 1, x - 1
                elif k == 2:
                    ny, nx = y - 1, x
                else:
                    ny, nx = y - 1, x + 1
                if ny < 0 or nx < 0 or nx >= w:
                    continue
                lab = labels[ny, nx]
                if lab == 0:
                    continue
                r = lab
                while parent[r] != r:
                    r = parent[r]
                if best == 0 or r < best:
                    best = r
            if best == 0:
                nprov += 1
                parent[nprov] = nprov
                labels[y, x] = nprov
            else:
                labels[y, x] = best
                for k in range(4):
                    if k == 0:
                        ny, nx = y, x - 1
                    elif k == 1:
                        ny, nx = y - 1, x - 1
                    elif k == 2:
                        ny, nx = y - 1, x
                    else:
                        ny, nx = y - 1, x + 1
                    if ny < 0 or nx < 0 or nx >= w:
                        continue
                    lab = labels[ny, nx]
                    if lab == 0:
                        continue
                    r = lab
                    while parent[r] != r:
                        r = parent[r]
                    if r != best:
                        parent[r] = best
    remap = np.zeros(nprov + 1, np.int32)
    count = 0
    for i in range(1, nprov + 1):
        r = i
        while parent[r] != r:
            r = parent[r]
        parent[i] = r
        if remap[r] == 0:
            count += 1
            remap[r] = count
    for y in range(h):
        for x in range(w):
            lab = labels[y, x]
            if lab > 0:
                labels[y, x] = remap[parent[lab]]
    return labels, count


def _pairwise_iou_impl(a, b):
    # a: (n, 4), b: (m, 4) center-format boxes [cx, cy, w, h] -> (n, m) IoU.
    n = a.shape[0]
    m = b.shape[0]
    out = np.zeros((n, m), np.float64)
    for i in range(n):
        ax0 = a[i, 0] - a[i, 2] * 0.5
        ax1 = a[i, 0] + a[i, 2] * 0.5
        ay0 = a[i, 1] - a[i, 3] * 0.5
        ay1 = a[i, 1] + a[i, 3] * 0.5
        aarea = a[i, 2] * a[i, 3]
        for j in range(m):
            bx0 = b[j, 0] - b[j, 2] * 0.5
            bx1 = b[j, 0] + b[j, 2] * 0.5
            by0 = b[j, 1] - b[j, 3] * 0.5
            by1 = b[j, 1] + b[j, 3] * 0.5
            iw = min(ax1, bx1) - max(ax0, bx0)
            if iw <= 0.0:
                continue
            ih = min(ay1, by1) - max(ay0, by0)
            if ih <= 0.0:
                continue
            inter = iw * ih
            union = aarea + b[j, 2] * b[j, 3] - inter
            if union > 0.0:
                out[i, j] = inter / union
    return out


def _box_fill_stats_impl(mask, x0, y0, x1, y1):
    # Fill ratio and per-row horizontal transition count inside a box.
    area = (x1 - x0) * (y1 - y0)
    if area <= 0:
        return 0.0, 0.0
    filled = 0
    transitions = 0
    for y in range(y0, y1):
        prev = 0
        for x in range(x0, x1):
            v = 1 if mask[y, x] != 0 else 0
            filled += v
            if v != prev:
                transitions += 1
            prev = v
        if prev == 1:
            transitions += 1
    return filled / area, transitions / max(y1 - y0, 1)


# Raw (uncompiled) bodies kept for the benchmark and parity tests.
PY_IMPLS = {
    "levenshtein_codes": _levenshtein_codes_impl,
    "label_components": _label_components_impl,
    "pairwise_iou": _pairwise_iou_impl,
    "box_fill_stats": _box_fill_stats_impl,
}

levenshtein_codes = _jit(_levenshtein_codes_impl)
label_components = _jit(_label_components_impl)
pairwise_iou = _jit(_pairwise_iou_impl)
box_fill_stats = _jit(_box_fill_stats_impl)


def warmup() -> None:
    """Trigger JIT compilation ahead of timing-sensitive paths."""
    a = np.array([74, 111, 110], np.uint32)
    levenshtein_codes(a, a)
    label_components(np.zeros((4, 4), np.uint8))
    boxes = np.array([[2.0, 2.0, 2.0, 2.0]])
    pairwise_iou(boxes, boxes)
    box_fill_stats(np.zeros((4, 4), np.uint8), 0, 0, 4, 4)
