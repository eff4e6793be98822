"""Boundary recall, undersegmentation error and achievable segmentation accuracy."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import distance_transform_edt

from .errors import InvalidConfigurationError, UndefinedMetricError
from .imagecore import LabelMap


@dataclass(frozen=True, eq=False)
class BoundaryMask:
    width: int
    height: int
    mask: np.ndarray

    @property
    def count(self) -> int:
        return int(self.mask.sum())


@dataclass
class MetricReport:
    br: float
    ue: float
    asa: float
    epsilon: float
    timings: dict = field(default_factory=dict)


def _as_array(labels) -> np.ndarray:
    return labels.labels if isinstance(labels, LabelMap) else np.asarray(labels)


def _check_pair(seg, gt):
    seg, gt = _as_array(seg), _as_array(gt)
    if seg.shape != gt.shape:
        raise InvalidConfigurationError(
            f"segmentation {seg.shape[::-1]} and ground truth {gt.shape[::-1]} differ in size"
        )
    return seg, gt


def boundary_mask(labels) -> BoundaryMask:
    """Pixels with at least one in-bounds 4-neighbor carrying a different label."""
    lab = _as_array(labels)
    mask = np.zeros(lab.shape, dtype=bool)
    dx = lab[:, 1:] != lab[:, :-1]
    dy = lab[1:, :] != lab[:-1, :]
    mask[:, 1:] |= dx
    mask[:, :-1] |= dx
    mask[1:, :] |= dy
    mask[:-1, :] |= dy
    return BoundaryMask(width=lab.shape[1], height=lab.shape[0], mask=mask)


def boundary_recall(seg, gt, epsilon: float = 2.0) -> float:
    """Fraction of ground-truth boundary pixels strictly closer than ``epsilon``
    (Euclidean) to a segmentation boundary pixel."""
    seg, gt = _check_pair(seg, gt)
    gt_b = boundary_mask(gt).mask
    n_gt = int(gt_b.sum())
    if n_gt == 0:
        raise UndefinedMetricError("ground truth has no boundary pixels (single segment)")
    seg_b = boundary_mask(seg).mask
    if not seg_b.any():
        return 0.0
    # Exact integer squared distances, from the nearest-boundary indices.
    _, (iy, ix) = distance_transform_edt(~seg_b, return_indices=True)
    py, px = np.nonzero(gt_b)
    d2 = (iy[py, px] - py) ** 2 + (ix[py, px] - px) ** 2
    return int((d2 < epsilon * epsilon).sum()) / n_gt


def _overlap(seg, gt):
    """Contingency counts for every (superpixel, segment) pair that overlaps."""
    _, s = np.unique(seg.ravel(), return_inverse=True)
    _, g = np.unique(gt.ravel(), return_inverse=True)
    n_g = int(g.max()) + 1
    pair, counts = np.unique(s.astype(np.int64) * n_g + g, return_counts=True)
    return pair // n_g, pair % n_g, counts


def undersegmentation_error(seg, gt) -> float:
    """Sum over overlapping (superpixel, segment) pairs of ``min(in, out)``, over N."""
    seg, gt = _check_pair(seg, gt)
    s_idx, _, inside = _overlap(seg, gt)
    size = np.bincount(s_idx, weights=inside).astype(np.int64)
    outside = size[s_idx] - inside
    return int(np.minimum(inside, outside).sum()) / seg.size


def achievable_segmentation_accuracy(seg, gt) -> float:
    """Pixels covered when each superpixel takes its best-overlapping segment, over N."""
    seg, gt = _check_pair(seg, gt)
    s_idx, _, inside = _overlap(seg, gt)
    best = np.zeros(int(s_idx.max()) + 1, dtype=np.int64)
    np.maximum.at(best, s_idx, inside)
    return int(best.sum()) / gt.size


def evaluate(seg, gt, epsilon: float = 2.0) -> MetricReport:
    timings = {}
    t = time.perf_counter()
    br = boundary_recall(seg, gt, epsilon)
    timings["br"] = time.perf_counter() - t
    t = time.perf_counter()
    ue = undersegmentation_error(seg, gt)
    timings["ue"] = time.perf_counter() - t
    t = time.perf_counter()
    asa = achievable_segmentation_accuracy(seg, gt)
    timings["asa"] = time.perf_counter() - t
    return MetricReport(br=br, ue=ue, asa=asa, epsilon=epsilon, timings=timings)
