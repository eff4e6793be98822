"""FLIC: active-search superpixels with joint seed updates.

Each pixel may only switch to a label carried by one of its 4 (or 8)
neighbors, choosing the seed nearest under the weighted Lab+xy distance.
Superpixels are traversed inside their bounding boxes, forward and then in
exact reverse, and a pixel's move is folded into both affected seeds at once.
"""

from __future__ import annotations

import math
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from skimage.measure import label as connected_components

from . import kernels
from .imagecore import (
    FeatureImage,
    GridSpec,
    LabelMap,
    SegmentationConfig,
    SuperpixelState,
    accumulate,
    grid_init,
    states_from_arrays,
)


def distance(p, s, m: float, n_s: float) -> float:
    """Weighted distance between a pixel feature and a seed, both (l, a, b, x, y)."""
    d_c = math.sqrt((p[0] - s[0]) ** 2 + (p[1] - s[1]) ** 2 + (p[2] - s[2]) ** 2)
    d_s = math.sqrt((p[3] - s[3]) ** 2 + (p[4] - s[4]) ** 2)
    return math.sqrt(d_c**2 + (d_s * m / n_s) ** 2)


@dataclass
class EngineState:
    """Mutable clustering state shared by the FLIC and SLIC drivers.

    ``sums``/``counts``/``bbox`` always describe the pixels currently carrying
    each label. The seed used for distances is ``(sums + offsets) / counts``.
    ``offsets`` is zero except for a perturbed seed that has not yet been
    updated; it places that seed on the chosen low-gradient pixel. The first
    joint update of a superpixel clears it, so from then on the seed is the
    exact centroid of the members.
    """

    features: FeatureImage
    labels: LabelMap
    config: SegmentationConfig
    grid: Optional[GridSpec]
    sums: np.ndarray
    counts: np.ndarray
    bbox: np.ndarray
    offsets: np.ndarray
    means: np.ndarray
    n_s: float

    @classmethod
    def initial(cls, features: FeatureImage, config: SegmentationConfig) -> EngineState:
        grid, labels = grid_init(features.width, features.height, config.k_requested)
        return cls.from_labels(features, labels, config, grid.k_actual, grid=grid)

    @classmethod
    def from_labels(cls, features, labels, config, k_actual, grid=None) -> EngineState:
        labels = LabelMap(labels.width, labels.height, labels.labels.copy())
        sums, counts, bbox = accumulate(features, labels, k_actual)
        offsets = np.zeros_like(sums)
        state = cls(
            features=features,
            labels=labels,
            config=config,
            grid=grid,
            sums=sums,
            counts=counts,
            bbox=bbox,
            offsets=offsets,
            means=np.zeros_like(sums),
            n_s=math.sqrt(features.n_pixels / config.k_requested),
        )
        state.refresh_means()
        return state

    @property
    def k_actual(self) -> int:
        return len(self.counts)

    @property
    def spatial_weight(self) -> float:
        """Squared spatial factor ``(m / N_s)**2`` applied to squared pixel distances."""
        return (self.config.compactness / self.n_s) ** 2

    @property
    def superpixels(self) -> list[SuperpixelState]:
        return states_from_arrays(self.sums, self.counts, self.bbox)

    def seed(self, k: int) -> tuple:
        return tuple(float(v) for v in self.means[k])

    def refresh_means(self):
        n = np.maximum(self.counts, 1)[:, None].astype(np.float64)
        self.means[:] = (self.sums + self.offsets) / n

    def recenter(self):
        """Rebuild sums, counts and boxes from the labels; seeds become centroids."""
        self.sums[:], self.counts[:], self.bbox[:] = accumulate(
            self.features, self.labels, self.k_actual
        )
        self.offsets[:] = 0.0
        self.refresh_means()

    def energy(self) -> float:
        """Sum over pixels of the squared distance to the pixel's own seed."""
        flat = self.features.flat
        seeds = self.means[self.labels.labels.ravel()]
        diff2 = (flat - seeds) ** 2
        return float(diff2[:, :3].sum() + diff2[:, 3:].sum() * self.spatial_weight)

    def kernel_args(self):
        return (
            self.features.flat,
            self.labels.labels.reshape(-1),
            self.sums,
            self.offsets,
            self.means,
            self.counts,
            self.bbox,
            self.features.width,
            self.features.height,
            self.spatial_weight,
            self.config.neighborhood,
            self.config.update_mode == "joint",
        )


@dataclass
class SegmentationResult:
    labels: LabelMap
    k_actual: int
    iterations_run: int
    label_changes: list[int] = field(default_factory=list)
    seconds: float = 0.0


Observer = Callable[[int, EngineState], None]


def color_gradient(features: FeatureImage, ys=None, xs=None) -> np.ndarray:
    """Squared central-difference Lab gradient with edges replicated.

    Evaluated on the whole image, or only at the given pixel coordinates.
    """
    lab = features.features
    h, w = features.height, features.width
    if ys is None:
        ys, xs = np.mgrid[0:h, 0:w]
    gx = lab[ys, np.minimum(xs + 1, w - 1), :3] - lab[ys, np.maximum(xs - 1, 0), :3]
    gy = lab[np.minimum(ys + 1, h - 1), xs, :3] - lab[np.maximum(ys - 1, 0), xs, :3]
    return (gx**2).sum(axis=-1) + (gy**2).sum(axis=-1)


_WINDOW_DY = np.array([-1, -1, -1, 0, 0, 0, 1, 1, 1])
_WINDOW_DX = np.array([-1, 0, 1, -1, 0, 1, -1, 0, 1])


def perturb_seeds(state: EngineState) -> EngineState:
    """Move each seed to the lowest-gradient pixel of the 3x3 window at its centroid.

    A seed only moves when some in-bounds window pixel has a strictly lower
    gradient than the centroid pixel; ties among those go to the first in
    row-major order. A moved seed takes that pixel's position and color.
    """
    feats = state.features
    h, w = feats.height, feats.width
    centroid = state.sums[:, 3:] / state.counts[:, None]
    cx = np.clip(np.floor(centroid[:, 0] + 0.5).astype(np.int64), 0, w - 1)
    cy = np.clip(np.floor(centroid[:, 1] + 0.5).astype(np.int64), 0, h - 1)

    ys = cy[:, None] + _WINDOW_DY
    xs = cx[:, None] + _WINDOW_DX
    inside = (ys >= 0) & (ys < h) & (xs >= 0) & (xs < w)
    ys, xs = np.clip(ys, 0, h - 1), np.clip(xs, 0, w - 1)
    g = np.where(inside, color_gradient(feats, ys, xs), np.inf)
    pick = np.argmin(g, axis=1)
    moved = g[np.arange(len(pick)), pick] < g[:, 4]

    k = np.nonzero(moved)[0]
    pixel = feats.features[ys[k, pick[k]], xs[k, pick[k]]]
    state.offsets[k] = state.counts[k, None] * pixel - state.sums[k]
    state.refresh_means()
    return state


def assign_pixel(state: EngineState, i: int, backend=None) -> Optional[tuple[int, int]]:
    """Active-search label decision for flat pixel index ``i``.

    Returns ``(old, new)`` when the label changed, ``None`` otherwise.
    """
    old = int(state.labels.labels.flat[i])
    new = kernels.get_backend(backend).assign_pixel(*state.kernel_args(), i)
    return (old, int(new)) if new >= 0 else None


def traverse_superpixel(state: EngineState, k: int, direction: str = "forward",
                        backend=None) -> int:
    """Scan superpixel ``k``'s bounding box and return the number of label changes."""
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be 'forward' or 'backward', got {direction!r}")
    impl = kernels.get_backend(backend)
    return int(impl.traverse(*state.kernel_args(), k, direction == "backward"))


def run(features: FeatureImage, config: SegmentationConfig,
        observer: Optional[Observer] = None, backend=None) -> SegmentationResult:
    """Segment ``features`` with FLIC.

    One iteration visits every superpixel in label order, scanning its box
    forward and, in back-and-forth mode, backward. In separate-update mode
    the seeds stay frozen during an iteration and are recomputed after it.
    ``observer(iteration, state)`` is called after every iteration.
    """
    impl = kernels.get_backend(backend)
    start = time.perf_counter()
    state = EngineState.initial(features, config)
    perturb_seeds(state)
    back_and_forth = config.scan_mode == "back-and-forth"
    changes = []
    for itr in range(config.iterations):
        changes.append(int(impl.flic_iteration(*state.kernel_args(), back_and_forth)))
        if config.update_mode == "separate":
            state.recenter()
        if observer is not None:
            observer(itr, state)
    labels = state.labels
    if config.enforce_connectivity:
        labels = enforce_connectivity(labels, state.k_actual)
    return SegmentationResult(
        labels=labels,
        k_actual=state.k_actual,
        iterations_run=config.iterations,
        label_changes=changes,
        seconds=time.perf_counter() - start,
    )


def enforce_connectivity(labels: LabelMap, k_actual: int) -> LabelMap:
    """Give every label a single 4-connected region.

    Each label keeps its largest component (earliest in scan order on ties).
    The remaining components, smallest first, are merged into the adjacent
    region sharing the most 4-adjacent pixel pairs with them, ties going to
    the smaller label.
    """
    lab = labels.labels
    comp = connected_components(lab.astype(np.int64) + 1, background=0, connectivity=1)
    comp = comp.ravel()
    n_comp = int(comp.max()) + 1
    sizes = np.bincount(comp, minlength=n_comp)
    first = np.full(n_comp, comp.size, dtype=np.int64)
    np.minimum.at(first, comp, np.arange(comp.size))
    comp_label = np.zeros(n_comp, dtype=np.int64)
    comp_label[comp] = lab.ravel()

    ids = np.arange(1, n_comp)
    order = np.lexsort((first[ids], -sizes[ids], comp_label[ids]))
    ranked = ids[order]
    keep = np.zeros(n_comp, dtype=bool)
    _, head = np.unique(comp_label[ranked], return_index=True)
    keep[ranked[head]] = True
    orphans = [c for c in ids if not keep[c]]
    if not orphans:
        return LabelMap(labels.width, labels.height, lab.copy())

    grid = comp.reshape(lab.shape)
    pairs = []
    for a, b in ((grid[:, :-1], grid[:, 1:]), (grid[:-1, :], grid[1:, :])):
        diff = a != b
        lo = np.minimum(a[diff], b[diff]).astype(np.int64)
        hi = np.maximum(a[diff], b[diff]).astype(np.int64)
        pairs.append(lo * n_comp + hi)
    keys, weights = np.unique(np.concatenate(pairs), return_counts=True)
    adj = defaultdict(dict)
    for key, wgt in zip(keys.tolist(), weights.tolist()):
        a, b = divmod(key, n_comp)
        adj[a][b] = wgt
        adj[b][a] = wgt

    parent = list(range(n_comp))
    orphans.sort(key=lambda c: (sizes[c], first[c]))
    for o in orphans:
        nbrs = adj.pop(o, {})
        target = min(nbrs, key=lambda n: (-nbrs[n], comp_label[n], first[n]))
        parent[o] = target
        tgt = adj[target]
        del tgt[o]
        for n, wgt in nbrs.items():
            if n == target:
                continue
            del adj[n][o]
            tgt[n] = tgt.get(n, 0) + wgt
            adj[n][target] = adj[n].get(target, 0) + wgt

    root = np.array(parent)
    while True:
        nxt = root[root]
        if np.array_equal(nxt, root):
            break
        root = nxt
    out = comp_label[root][comp].reshape(lab.shape)
    return LabelMap(labels.width, labels.height, out)
