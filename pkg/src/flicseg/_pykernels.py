"""Pure-Python kernels, used when the compiled extension is unavailable.

Every function here mirrors one in ``_ckernels.pyx`` and performs the same
floating-point operations in the same order, so both backends produce
bit-identical label maps.

Array arguments (all C-contiguous numpy arrays):

``feats``    float64 (N, 5) pixel features
``labels``   int32 (N,) flat label map, mutated in place
``sums``     float64 (K, 5) member feature sums
``offsets``  float64 (K, 5) sum-space displacement of a perturbed seed,
             cleared the first time the superpixel gains or loses a pixel
``means``    float64 (K, 5) seeds, ``(sums + offsets) / counts``
``counts``   int64 (K,) member counts
``bbox``     int32 (K, 4) inclusive (x0, y0, x1, y1)
"""

import math

import numpy as np

NAME = "python"

# (dy, dx): up, left, right, down, then NW, NE, SW, SE.
NEIGHBOR_OFFSETS = ((-1, 0), (0, -1), (0, 1), (1, 0), (-1, -1), (-1, 1), (1, -1), (1, 1))


class _Lists:
    """Python-list mirror of the engine arrays, written back on ``flush``."""

    def __init__(self, feats, labels, sums, offsets, means, counts, bbox):
        self.arrays = (labels, sums, offsets, means, counts, bbox)
        self.feats = feats.tolist()
        self.labels = labels.tolist()
        self.sums = sums.tolist()
        self.offsets = offsets.tolist()
        self.means = means.tolist()
        self.counts = counts.tolist()
        self.bbox = bbox.tolist()

    def flush(self):
        labels, sums, offsets, means, counts, bbox = self.arrays
        labels[:] = self.labels
        sums[:] = self.sums
        offsets[:] = self.offsets
        means[:] = self.means
        counts[:] = self.counts
        bbox[:] = self.bbox


def _assign(s, width, height, w2, neighborhood, joint, i):
    feats = s.feats
    labels = s.labels
    means = s.means
    f = feats[i]
    fl, fa, fb, fx, fy = f
    cur = labels[i]
    seed = means[cur]
    dl = fl - seed[0]
    da = fa - seed[1]
    db = fb - seed[2]
    dx = fx - seed[3]
    dy = fy - seed[4]
    best_d = dl * dl + da * da + db * db + (dx * dx + dy * dy) * w2
    best = cur
    y, x = divmod(i, width)
    for n in range(neighborhood):
        oy, ox = NEIGHBOR_OFFSETS[n]
        ny = y + oy
        nx = x + ox
        if ny < 0 or ny >= height or nx < 0 or nx >= width:
            continue
        lj = labels[ny * width + nx]
        if lj == best or lj == cur:
            continue
        seed = means[lj]
        dl = fl - seed[0]
        da = fa - seed[1]
        db = fb - seed[2]
        dx = fx - seed[3]
        dy = fy - seed[4]
        d = dl * dl + da * da + db * db + (dx * dx + dy * dy) * w2
        if d < best_d:
            best_d = d
            best = lj
    if best == cur:
        return -1
    counts = s.counts
    if counts[cur] <= 1:
        return -1
    labels[i] = best
    counts[cur] -= 1
    counts[best] += 1
    if joint:
        sums = s.sums
        offsets = s.offsets
        lose = sums[cur]
        gain = sums[best]
        for c in range(5):
            lose[c] -= f[c]
            gain[c] += f[c]
        offsets[cur] = [0.0] * 5
        offsets[best] = [0.0] * 5
        n_lose = counts[cur]
        n_gain = counts[best]
        means[cur] = [v / n_lose for v in lose]
        means[best] = [v / n_gain for v in gain]
    box = s.bbox[best]
    if x < box[0]:
        box[0] = x
    if y < box[1]:
        box[1] = y
    if x > box[2]:
        box[2] = x
    if y > box[3]:
        box[3] = y
    return best


def _traverse(s, width, height, w2, neighborhood, joint, k, backward):
    x0, y0, x1, y1 = s.bbox[k]
    labels = s.labels
    changes = 0
    if backward:
        rows = range(y1, y0 - 1, -1)
        cols = range(x1, x0 - 1, -1)
    else:
        rows = range(y0, y1 + 1)
        cols = range(x0, x1 + 1)
    for y in rows:
        base = y * width
        for x in cols:
            i = base + x
            if labels[i] != k:
                continue
            if _assign(s, width, height, w2, neighborhood, joint, i) >= 0:
                changes += 1
    return changes


def _recompute_bbox(s, width, height):
    bbox = s.bbox
    for box in bbox:
        box[0] = width
        box[1] = height
        box[2] = -1
        box[3] = -1
    labels = s.labels
    i = 0
    for y in range(height):
        for x in range(width):
            box = bbox[labels[i]]
            if x < box[0]:
                box[0] = x
            if x > box[2]:
                box[2] = x
            if y < box[1]:
                box[1] = y
            if y > box[3]:
                box[3] = y
            i += 1


def accumulate(feats, labels, sums, counts, bbox, width, height):
    """Fill sums, counts and exact boxes; empty labels get ``(W, H, -1, -1)``."""
    k_total = counts.shape[0]
    for c in range(5):
        sums[:, c] = np.bincount(labels, weights=feats[:, c], minlength=k_total)
    counts[:] = np.bincount(labels, minlength=k_total)
    lab = labels.reshape(height, width)
    bbox[:, 0], bbox[:, 1] = width, height
    bbox[:, 2], bbox[:, 3] = -1, -1
    cols = np.zeros((k_total, width), dtype=bool)
    rows = np.zeros((k_total, height), dtype=bool)
    cols[lab, np.arange(width)[None, :]] = True
    rows[lab, np.arange(height)[:, None]] = True
    k = np.nonzero(counts)[0]
    bbox[k, 0] = np.argmax(cols[k], axis=1)
    bbox[k, 2] = width - 1 - np.argmax(cols[k, ::-1], axis=1)
    bbox[k, 1] = np.argmax(rows[k], axis=1)
    bbox[k, 3] = height - 1 - np.argmax(rows[k, ::-1], axis=1)


def assign_pixel(feats, labels, sums, offsets, means, counts, bbox,
                 width, height, w2, neighborhood, joint, i):
    """Active-search decision for pixel ``i``; returns the new label or -1."""
    s = _Lists(feats, labels, sums, offsets, means, counts, bbox)
    out = _assign(s, width, height, w2, neighborhood, joint, i)
    s.flush()
    return out


def traverse(feats, labels, sums, offsets, means, counts, bbox,
             width, height, w2, neighborhood, joint, k, backward):
    s = _Lists(feats, labels, sums, offsets, means, counts, bbox)
    out = _traverse(s, width, height, w2, neighborhood, joint, k, backward)
    s.flush()
    return out


def flic_iteration(feats, labels, sums, offsets, means, counts, bbox,
                   width, height, w2, neighborhood, joint, back_and_forth):
    """One iteration: fresh bounding boxes, then every superpixel in label order."""
    s = _Lists(feats, labels, sums, offsets, means, counts, bbox)
    _recompute_bbox(s, width, height)
    changes = 0
    for k in range(len(s.counts)):
        changes += _traverse(s, width, height, w2, neighborhood, joint, k, False)
        if back_and_forth:
            changes += _traverse(s, width, height, w2, neighborhood, joint, k, True)
    s.flush()
    return changes


def slic_assign(feats, labels, means, dist, width, height, w2, radius):
    """Nearest seed among those whose window ``|dx|, |dy| <= radius`` covers the pixel.

    Seeds are visited in index order with a strict comparison, so ties go
    to the lowest index. Uncovered pixels keep their label. ``dist`` is a
    float64 (N,) scratch buffer. Returns the number of label changes.
    """
    f = feats.tolist()
    old = labels.tolist()
    lab = list(old)
    best = [float("inf")] * len(lab)
    for k, seed in enumerate(means.tolist()):
        sl, sa, sb, sx, sy = seed
        xa = max(0, math.ceil(sx - radius))
        xb = min(width - 1, math.floor(sx + radius))
        ya = max(0, math.ceil(sy - radius))
        yb = min(height - 1, math.floor(sy + radius))
        for y in range(ya, yb + 1):
            base = y * width
            for x in range(xa, xb + 1):
                i = base + x
                fl, fa, fb, fx, fy = f[i]
                dl = fl - sl
                da = fa - sa
                db = fb - sb
                dx = fx - sx
                dy = fy - sy
                d = dl * dl + da * da + db * db + (dx * dx + dy * dy) * w2
                if d < best[i]:
                    best[i] = d
                    lab[i] = k
    labels[:] = lab
    dist[:] = best
    return sum(1 for a, b in zip(old, lab) if a != b)
