"""SLIC baseline: windowed nearest-seed assignment with separate centroid updates."""

from __future__ import annotations

import time
from typing import Optional

import numpy as np

from . import kernels
from .flic import EngineState, Observer, SegmentationResult, enforce_connectivity, perturb_seeds
from .imagecore import FeatureImage, SegmentationConfig


def window_coverage(state: EngineState) -> np.ndarray:
    """Boolean (H, W) map of pixels inside at least one seed's 2T x 2T window."""
    h, w = state.features.height, state.features.width
    covered = np.zeros((h, w), dtype=bool)
    radius = state.n_s
    for sx, sy in state.means[:, 3:]:
        xa, xb = max(0, int(np.ceil(sx - radius))), min(w - 1, int(np.floor(sx + radius)))
        ya, yb = max(0, int(np.ceil(sy - radius))), min(h - 1, int(np.floor(sy + radius)))
        covered[ya : yb + 1, xa : xb + 1] = True
    return covered


def _refill_empty(state: EngineState) -> int:
    """Give every empty cluster the pixel nearest its seed; returns pixels moved.

    The pixel is taken from a cluster that keeps at least one member.
    """
    labels = state.labels.labels.reshape(-1)
    counts = np.bincount(labels, minlength=state.k_actual)
    moved = 0
    if counts.min() > 0:
        return moved
    flat = state.features.flat
    for k in np.nonzero(counts == 0)[0]:
        d2 = ((flat[:, 3:] - state.means[k, 3:]) ** 2).sum(axis=1)
        d2[counts[labels] < 2] = np.inf
        i = int(np.argmin(d2))
        counts[labels[i]] -= 1
        counts[k] += 1
        labels[i] = k
        moved += 1
    return moved


def run_slic(features: FeatureImage, config: SegmentationConfig,
             observer: Optional[Observer] = None, backend=None) -> SegmentationResult:
    """Segment ``features`` with SLIC.

    Each iteration assigns every pixel to the nearest seed whose window of
    half-width ``T = sqrt(N / K)`` covers it, then moves all seeds to their
    region centroids. ``config.update_mode`` and ``config.scan_mode`` are ignored.
    """
    impl = kernels.get_backend(backend)
    start = time.perf_counter()
    state = EngineState.initial(features, config)
    perturb_seeds(state)
    feats, labels = state.features.flat, state.labels.labels.reshape(-1)
    dist = np.empty(labels.size, dtype=np.float64)
    changes = []
    for itr in range(config.iterations):
        n = impl.slic_assign(
            feats, labels, state.means, dist,
            features.width, features.height, state.spatial_weight, state.n_s,
        )
        changes.append(int(n) + _refill_empty(state))
        state.recenter()
        if observer is not None:
            observer(itr, state)
    out = state.labels
    if config.enforce_connectivity:
        out = enforce_connectivity(out, state.k_actual)
    return SegmentationResult(
        labels=out,
        k_actual=state.k_actual,
        iterations_run=config.iterations,
        label_changes=changes,
        seconds=time.perf_counter() - start,
    )
