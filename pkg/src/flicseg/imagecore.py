"""Core image, label and superpixel types plus regular-grid initialization."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .errors import CorruptLabelsError, InvalidConfigurationError

#: Feature channel order of a :class:`FeatureImage`.
CHANNELS = ("l", "a", "b", "x", "y")

SCAN_MODES = ("back-and-forth", "forward")
UPDATE_MODES = ("joint", "separate")
ALGORITHMS = ("flic", "slic")


@dataclass(frozen=True, eq=False)
class RawImage:
    """8-bit RGB image, ``data`` has shape (height, width, 3).

    Any positive size can be held; segmentation requires at least 3x3.
    """

    width: int
    height: int
    data: np.ndarray

    def __post_init__(self):
        data = np.ascontiguousarray(self.data, dtype=np.uint8)
        if data.shape != (self.height, self.width, 3):
            raise InvalidConfigurationError(
                f"RGB data has shape {data.shape}, expected ({self.height}, {self.width}, 3)"
            )
        if self.width < 1 or self.height < 1:
            raise InvalidConfigurationError(f"empty image {self.width}x{self.height}")
        object.__setattr__(self, "data", data)

    @classmethod
    def from_array(cls, data) -> RawImage:
        data = np.asarray(data)
        return cls(width=data.shape[1], height=data.shape[0], data=data)

    @property
    def n_pixels(self) -> int:
        return self.width * self.height


@dataclass(frozen=True, eq=False)
class FeatureImage:
    """Per-pixel (l, a, b, x, y) features, ``features`` has shape (height, width, 5)."""

    width: int
    height: int
    features: np.ndarray

    def __post_init__(self):
        feats = np.ascontiguousarray(self.features, dtype=np.float64)
        if feats.shape != (self.height, self.width, 5):
            raise InvalidConfigurationError(
                f"feature array has shape {feats.shape}, expected ({self.height}, {self.width}, 5)"
            )
        object.__setattr__(self, "features", feats)

    @classmethod
    def from_lab(cls, lab) -> FeatureImage:
        """Attach pixel coordinates to an (H, W, 3) CIELAB array."""
        lab = np.asarray(lab, dtype=np.float64)
        height, width = lab.shape[:2]
        feats = np.empty((height, width, 5), dtype=np.float64)
        feats[..., :3] = lab
        feats[..., 3] = np.arange(width)[None, :]
        feats[..., 4] = np.arange(height)[:, None]
        return cls(width=width, height=height, features=feats)

    @property
    def n_pixels(self) -> int:
        return self.width * self.height

    @property
    def flat(self) -> np.ndarray:
        """(N, 5) row-major view."""
        return self.features.reshape(-1, 5)


@dataclass(frozen=True, eq=False)
class LabelMap:
    """Per-pixel superpixel index, ``labels`` has shape (height, width)."""

    width: int
    height: int
    labels: np.ndarray

    def __post_init__(self):
        labels = np.ascontiguousarray(self.labels, dtype=np.int32)
        if labels.shape != (self.height, self.width):
            raise InvalidConfigurationError(
                f"label array has shape {labels.shape}, expected ({self.height}, {self.width})"
            )
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_array(cls, labels) -> LabelMap:
        labels = np.asarray(labels)
        return cls(width=labels.shape[1], height=labels.shape[0], labels=labels)

    def __eq__(self, other):
        if not isinstance(other, LabelMap):
            return NotImplemented
        return self.labels.shape == other.labels.shape and bool(
            np.array_equal(self.labels, other.labels)
        )

    @property
    def n_labels(self) -> int:
        """Number of distinct label values present."""
        return int(np.unique(self.labels).size)


@dataclass
class SuperpixelState:
    """Running sums, member count and inclusive bounding box of one superpixel."""

    sum_l: float
    sum_a: float
    sum_b: float
    sum_x: float
    sum_y: float
    count: int
    bbox: tuple[int, int, int, int]  # (x_min, y_min, x_max, y_max)

    @property
    def mean(self) -> tuple[float, float, float, float, float]:
        n = self.count
        return (self.sum_l / n, self.sum_a / n, self.sum_b / n, self.sum_x / n, self.sum_y / n)


@dataclass(frozen=True)
class SegmentationConfig:
    k_requested: int
    compactness: float = 5.0
    iterations: int = 2
    neighborhood: int = 4
    scan_mode: str = "back-and-forth"
    update_mode: str = "joint"
    algorithm: str = "flic"
    enforce_connectivity: bool = False

    def __post_init__(self):
        if self.k_requested < 1:
            raise InvalidConfigurationError(f"k_requested must be >= 1, got {self.k_requested}")
        if not self.compactness > 0:
            raise InvalidConfigurationError(f"compactness must be > 0, got {self.compactness}")
        if self.iterations < 1:
            raise InvalidConfigurationError(f"iterations must be >= 1, got {self.iterations}")
        if self.neighborhood not in (4, 8):
            raise InvalidConfigurationError(f"neighborhood must be 4 or 8, got {self.neighborhood}")
        if self.scan_mode not in SCAN_MODES:
            raise InvalidConfigurationError(f"unknown scan mode {self.scan_mode!r}")
        if self.update_mode not in UPDATE_MODES:
            raise InvalidConfigurationError(f"unknown update mode {self.update_mode!r}")
        if self.algorithm not in ALGORITHMS:
            raise InvalidConfigurationError(f"unknown algorithm {self.algorithm!r}")

    @classmethod
    def defaults(cls, algorithm: str = "flic", **overrides) -> SegmentationConfig:
        """Config with per-algorithm defaults; ``None`` overrides are ignored.

        FLIC runs 2 iterations without connectivity enforcement, SLIC runs
        10 Lloyd iterations followed by connectivity enforcement.
        """
        base = {"iterations": 2, "enforce_connectivity": False}
        if algorithm == "slic":
            base = {"iterations": 10, "enforce_connectivity": True, "update_mode": "separate"}
        base.update({k: v for k, v in overrides.items() if v is not None})
        return cls(algorithm=algorithm, **base)

    def with_(self, **changes) -> SegmentationConfig:
        return replace(self, **changes)


@dataclass(frozen=True)
class GridSpec:
    step: float
    cols: int
    rows: int
    width: int
    height: int
    k_actual: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "k_actual", self.cols * self.rows)

    @property
    def col_edges(self) -> np.ndarray:
        """Cell column boundaries, ``cols + 1`` values from 0 to width."""
        return (np.arange(self.cols + 1, dtype=np.int64) * self.width) // self.cols

    @property
    def row_edges(self) -> np.ndarray:
        return (np.arange(self.rows + 1, dtype=np.int64) * self.height) // self.rows


def _round_half_up(v: float) -> int:
    return int(math.floor(v + 0.5))


def grid_init(width: int, height: int, k_requested: int) -> tuple[GridSpec, LabelMap]:
    """Split the image into a regular grid of roughly ``k_requested`` cells.

    The row count is ``round(height / step)`` with ``step = sqrt(N / K)`` and
    the column count is ``round(K / rows)``, so a square image asked for two
    cells is split into a left and a right half. Cell edges follow
    ``floor(i * width / cols)``. Labels are row-major cell indices.
    """
    if width < 3 or height < 3:
        raise InvalidConfigurationError(f"image must be at least 3x3, got {width}x{height}")
    n = width * height
    if k_requested < 1 or k_requested > n / 4:
        raise InvalidConfigurationError(
            f"k_requested must lie in [1, N/4] = [1, {n / 4:g}], got {k_requested}"
        )
    step = math.sqrt(n / k_requested)
    rows = min(height, max(1, _round_half_up(height / step)))
    cols = min(width, max(1, _round_half_up(k_requested / rows)))
    grid = GridSpec(step=step, cols=cols, rows=rows, width=width, height=height)

    col_of = np.searchsorted(grid.col_edges, np.arange(width), side="right") - 1
    row_of = np.searchsorted(grid.row_edges, np.arange(height), side="right") - 1
    labels = row_of[:, None] * cols + col_of[None, :]
    return grid, LabelMap(width=width, height=height, labels=labels)


def accumulate(features: FeatureImage, labels: LabelMap, k_actual: int):
    """Sums, counts and bounding boxes for every label.

    Returns ``(sums, counts, bbox)`` with shapes (K, 5), (K,) and (K, 4).
    Empty labels get zero sums and an inverted box ``(W, H, -1, -1)``.
    """
    if (labels.width, labels.height) != (features.width, features.height):
        raise InvalidConfigurationError("label map and feature image differ in size")
    lab = labels.labels.reshape(-1)
    if lab.size and (lab.min() < 0 or lab.max() >= k_actual):
        bad = int(lab.max()) if lab.max() >= k_actual else int(lab.min())
        raise CorruptLabelsError(f"label {bad} outside [0, {k_actual})")
    sums = np.empty((k_actual, 5), dtype=np.float64)
    counts = np.empty(k_actual, dtype=np.int64)
    bbox = np.empty((k_actual, 4), dtype=np.int32)
    kernels.get_backend().accumulate(
        features.flat, lab, sums, counts, bbox, labels.width, labels.height
    )
    return sums, counts, bbox


def states_from_arrays(sums, counts, bbox) -> list[SuperpixelState]:
    return [
        SuperpixelState(
            *(float(v) for v in sums[k]),
            count=int(counts[k]),
            bbox=tuple(int(v) for v in bbox[k]),
        )
        for k in range(len(counts))
    ]


def init_superpixel_states(
    features: FeatureImage, labels: LabelMap, k_actual: int
) -> list[SuperpixelState]:
    """Per-label sums, counts and bounding boxes; seed means are the cell centroids."""
    return states_from_arrays(*accumulate(features, labels, k_actual))
