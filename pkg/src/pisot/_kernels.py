"""Hot inner loops, compiled with numba when available.

Every kernel exists twice: a plain loop body (jitted by numba) and a
vectorized numpy version. Set ``PISOT_NO_NUMBA=1`` to force the numpy path;
it is also used automatically when numba cannot be imported.
"""

import os

import numpy as np

_DISABLED = os.environ.get("PISOT_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by PISOT_NO_NUMBA")
    from numba import njit
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# Prefix abelianizations: row k holds the letter counts of codes[:k]
# ---------------------------------------------------------------------------

def _prefix_counts_loop(codes, d):
    n = codes.shape[0]
    out = np.zeros((n + 1, d), dtype=np.int64)
    for k in range(n):
        for j in range(d):
            out[k + 1, j] = out[k, j]
        out[k + 1, codes[k]] += 1
    return out


def prefix_counts_numpy(codes, d):
    codes = np.asarray(codes, dtype=np.int64)
    out = np.zeros((codes.shape[0] + 1, d), dtype=np.int64)
    out[1:] = np.eye(d, dtype=np.int64)[codes]
    np.cumsum(out, axis=0, out=out)
    return out


# ---------------------------------------------------------------------------
# Positions k (0 <= k <= n) where codes1[:k] and codes2[:k] have equal
# abelianizations. max_hits < 0 means no limit.
# ---------------------------------------------------------------------------

def _balanced_positions_loop(codes1, codes2, d, max_hits):
    n = min(codes1.shape[0], codes2.shape[0])
    diff = np.zeros(d, dtype=np.int64)
    hits = np.empty(n + 1, dtype=np.int64)
    hits[0] = 0
    count = 1
    nonzero = 0
    for k in range(n):
        if count == max_hits:
            break
        a = codes1[k]
        b = codes2[k]
        if a != b:
            before = diff[a]
            diff[a] = before + 1
            if before == 0:
                nonzero += 1
            elif before == -1:
                nonzero -= 1
            before = diff[b]
            diff[b] = before - 1
            if before == 0:
                nonzero += 1
            elif before == 1:
                nonzero -= 1
        if nonzero == 0:
            hits[count] = k + 1
            count += 1
    return hits[:count]


def balanced_positions_numpy(codes1, codes2, d, max_hits=-1):
    n = min(len(codes1), len(codes2))
    c1 = np.asarray(codes1[:n], dtype=np.int64)
    c2 = np.asarray(codes2[:n], dtype=np.int64)
    step = np.zeros((n + 1, d), dtype=np.int64)
    rows = np.arange(1, n + 1)
    step[rows, c1] += 1
    step[rows, c2] -= 1
    np.cumsum(step, axis=0, out=step)
    hits = np.flatnonzero(~step.any(axis=1))
    if max_hits >= 0:
        hits = hits[:max_hits]
    return hits.astype(np.int64)


# ---------------------------------------------------------------------------
# Painting: last write wins, in point order
# ---------------------------------------------------------------------------

def _paint_loop(img, rows, cols, labels, palette):
    for k in range(rows.shape[0]):
        r = rows[k]
        c = cols[k]
        lab = labels[k]
        img[r, c, 0] = palette[lab, 0]
        img[r, c, 1] = palette[lab, 1]
        img[r, c, 2] = palette[lab, 2]
    return img


def paint_numpy(img, rows, cols, labels, palette):
    h, w = img.shape[:2]
    flat = np.asarray(rows, dtype=np.int64) * w + np.asarray(cols, dtype=np.int64)
    # index of the last occurrence of every touched pixel
    rev_unique, rev_first = np.unique(flat[::-1], return_index=True)
    last = len(flat) - 1 - rev_first
    img.reshape(h * w, 3)[rev_unique] = palette[np.asarray(labels)[last]]
    return img


if HAS_NUMBA:
    _prefix_counts_jit = njit(cache=True)(_prefix_counts_loop)
    _balanced_positions_jit = njit(cache=True)(_balanced_positions_loop)
    _paint_jit = njit(cache=True)(_paint_loop)

    def prefix_counts_numba(codes, d):
        return _prefix_counts_jit(np.ascontiguousarray(codes, dtype=np.int64), d)

    def balanced_positions_numba(codes1, codes2, d, max_hits=-1):
        return _balanced_positions_jit(
            np.ascontiguousarray(codes1, dtype=np.int64),
            np.ascontiguousarray(codes2, dtype=np.int64),
            d,
            max_hits,
        )

    def paint_numba(img, rows, cols, labels, palette):
        return _paint_jit(
            img,
            np.ascontiguousarray(rows, dtype=np.int64),
            np.ascontiguousarray(cols, dtype=np.int64),
            np.ascontiguousarray(labels, dtype=np.int64),
            np.ascontiguousarray(palette, dtype=np.uint8),
        )

    prefix_counts = prefix_counts_numba
    balanced_positions = balanced_positions_numba
    paint = paint_numba
else:
    prefix_counts = prefix_counts_numpy
    balanced_positions = balanced_positions_numpy
    paint = paint_numpy
