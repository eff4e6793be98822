# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; see ``_pykernels`` for the argument conventions."""

from libc.math cimport ceil, floor, INFINITY

NAME = "cython"

cdef int[8] NB_DY
cdef int[8] NB_DX
NB_DY[:] = [-1, 0, 0, 1, -1, -1, 1, 1]
NB_DX[:] = [0, -1, 1, 0, -1, 1, -1, 1]


cdef inline double _dist2(const double[:, ::1] feats, Py_ssize_t i,
                          double[:, ::1] means, Py_ssize_t k, double w2) noexcept nogil:
    cdef double dl = feats[i, 0] - means[k, 0]
    cdef double da = feats[i, 1] - means[k, 1]
    cdef double db = feats[i, 2] - means[k, 2]
    cdef double dx = feats[i, 3] - means[k, 3]
    cdef double dy = feats[i, 4] - means[k, 4]
    return dl * dl + da * da + db * db + (dx * dx + dy * dy) * w2


cdef int _assign(const double[:, ::1] feats, int[::1] labels, double[:, ::1] sums,
                 double[:, ::1] offsets, double[:, ::1] means, long long[::1] counts,
                 int[:, ::1] bbox, int width, int height, double w2, int neighborhood,
                 bint joint, Py_ssize_t i) noexcept nogil:
    cdef int cur = labels[i]
    cdef int best = cur
    cdef int lj, n, c
    cdef Py_ssize_t ny, nx
    cdef Py_ssize_t y = i // width
    cdef Py_ssize_t x = i - y * width
    cdef double best_d = _dist2(feats, i, means, cur, w2)
    cdef double d
    cdef double n_lose, n_gain
    for n in range(neighborhood):
        ny = y + NB_DY[n]
        nx = x + NB_DX[n]
        if ny < 0 or ny >= height or nx < 0 or nx >= width:
            continue
        lj = labels[ny * width + nx]
        if lj == best or lj == cur:
            continue
        d = _dist2(feats, i, means, lj, w2)
        if d < best_d:
            best_d = d
            best = lj
    if best == cur:
        return -1
    if counts[cur] <= 1:
        return -1
    labels[i] = best
    counts[cur] -= 1
    counts[best] += 1
    if joint:
        n_lose = <double>counts[cur]
        n_gain = <double>counts[best]
        for c in range(5):
            sums[cur, c] -= feats[i, c]
            sums[best, c] += feats[i, c]
            offsets[cur, c] = 0.0
            offsets[best, c] = 0.0
            means[cur, c] = sums[cur, c] / n_lose
            means[best, c] = sums[best, c] / n_gain
    if x < bbox[best, 0]:
        bbox[best, 0] = <int>x
    if y < bbox[best, 1]:
        bbox[best, 1] = <int>y
    if x > bbox[best, 2]:
        bbox[best, 2] = <int>x
    if y > bbox[best, 3]:
        bbox[best, 3] = <int>y
    return best


cdef long long _traverse(const double[:, ::1] feats, int[::1] labels, double[:, ::1] sums,
                         double[:, ::1] offsets, double[:, ::1] means,
                         long long[::1] counts, int[:, ::1] bbox, int width, int height,
                         double w2, int neighborhood, bint joint, int k,
                         bint backward) noexcept nogil:
    cdef int x0 = bbox[k, 0]
    cdef int y0 = bbox[k, 1]
    cdef int x1 = bbox[k, 2]
    cdef int y1 = bbox[k, 3]
    cdef int x, y
    cdef Py_ssize_t i
    cdef long long changes = 0
    if not backward:
        for y in range(y0, y1 + 1):
            for x in range(x0, x1 + 1):
                i = <Py_ssize_t>y * width + x
                if labels[i] != k:
                    continue
                if _assign(feats, labels, sums, offsets, means, counts, bbox,
                           width, height, w2, neighborhood, joint, i) >= 0:
                    changes += 1
    else:
        for y in range(y1, y0 - 1, -1):
            for x in range(x1, x0 - 1, -1):
                i = <Py_ssize_t>y * width + x
                if labels[i] != k:
                    continue
                if _assign(feats, labels, sums, offsets, means, counts, bbox,
                           width, height, w2, neighborhood, joint, i) >= 0:
                    changes += 1
    return changes


cdef void _recompute_bbox(int[::1] labels, int[:, ::1] bbox, int width,
                          int height) noexcept nogil:
    cdef Py_ssize_t k, i = 0
    cdef int x, y, lab
    for k in range(bbox.shape[0]):
        bbox[k, 0] = width
        bbox[k, 1] = height
        bbox[k, 2] = -1
        bbox[k, 3] = -1
    for y in range(height):
        for x in range(width):
            lab = labels[i]
            if x < bbox[lab, 0]:
                bbox[lab, 0] = x
            if x > bbox[lab, 2]:
                bbox[lab, 2] = x
            if y < bbox[lab, 1]:
                bbox[lab, 1] = y
            if y > bbox[lab, 3]:
                bbox[lab, 3] = y
            i += 1


def accumulate(const double[:, ::1] feats, int[::1] labels, double[:, ::1] sums,
               long long[::1] counts, int[:, ::1] bbox, int width, int height):
    """Fill sums, counts and exact boxes; empty labels get ``(W, H, -1, -1)``."""
    cdef Py_ssize_t i, k, n = labels.shape[0]
    cdef int c, lab
    with nogil:
        for k in range(sums.shape[0]):
            counts[k] = 0
            for c in range(5):
                sums[k, c] = 0.0
        for i in range(n):
            lab = labels[i]
            counts[lab] += 1
            for c in range(5):
                sums[lab, c] += feats[i, c]
        _recompute_bbox(labels, bbox, width, height)


def assign_pixel(const double[:, ::1] feats, int[::1] labels, double[:, ::1] sums,
                 double[:, ::1] offsets, double[:, ::1] means, long long[::1] counts,
                 int[:, ::1] bbox, int width, int height, double w2, int neighborhood,
                 bint joint, Py_ssize_t i):
    return _assign(feats, labels, sums, offsets, means, counts, bbox,
                   width, height, w2, neighborhood, joint, i)


def traverse(const double[:, ::1] feats, int[::1] labels, double[:, ::1] sums,
             double[:, ::1] offsets, double[:, ::1] means, long long[::1] counts,
             int[:, ::1] bbox, int width, int height, double w2, int neighborhood,
             bint joint, int k, bint backward):
    return _traverse(feats, labels, sums, offsets, means, counts, bbox,
                     width, height, w2, neighborhood, joint, k, backward)


def flic_iteration(const double[:, ::1] feats, int[::1] labels, double[:, ::1] sums,
                   double[:, ::1] offsets, double[:, ::1] means,
                   long long[::1] counts, int[:, ::1] bbox, int width, int height,
                   double w2, int neighborhood, bint joint, bint back_and_forth):
    cdef long long changes = 0
    cdef int k
    cdef int n_sp = <int>counts.shape[0]
    with nogil:
        _recompute_bbox(labels, bbox, width, height)
        for k in range(n_sp):
            changes += _traverse(feats, labels, sums, offsets, means, counts, bbox,
                                 width, height, w2, neighborhood, joint, k, False)
            if back_and_forth:
                changes += _traverse(feats, labels, sums, offsets, means, counts, bbox,
                                     width, height, w2, neighborhood, joint, k, True)
    return changes


def slic_assign(const double[:, ::1] feats, int[::1] labels, double[:, ::1] means,
                double[::1] dist, int width, int height, double w2, double radius):
    cdef Py_ssize_t n = labels.shape[0]
    cdef Py_ssize_t i, k
    cdef int xa, xb, ya, yb, x, y
    cdef double d, sx, sy
    cdef long long changes = 0
    cdef int[::1] old = labels.copy()
    with nogil:
        for i in range(n):
            dist[i] = INFINITY
        for k in range(means.shape[0]):
            sx = means[k, 3]
            sy = means[k, 4]
            xa = <int>ceil(sx - radius)
            xb = <int>floor(sx + radius)
            ya = <int>ceil(sy - radius)
            yb = <int>floor(sy + radius)
            if xa < 0:
                xa = 0
            if ya < 0:
                ya = 0
            if xb > width - 1:
                xb = width - 1
            if yb > height - 1:
                yb = height - 1
            for y in range(ya, yb + 1):
                for x in range(xa, xb + 1):
                    i = <Py_ssize_t>y * width + x
                    d = _dist2(feats, i, means, k, w2)
                    if d < dist[i]:
                        dist[i] = d
                        labels[i] = <int>k
        for i in range(n):
            if labels[i] != old[i]:
                changes += 1
    return changes
