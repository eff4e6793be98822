"""Synthetic images with exact ground-truth label maps, for dataset-free evaluation."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .imagecore import LabelMap, RawImage

KINDS = ("split", "gradient", "blocks", "rects")


def _random_color(rng) -> np.ndarray:
    return rng.integers(0, 256, size=3).astype(np.float64)


def _distinct_colors(rng, n, min_gap=60.0) -> np.ndarray:
    colors = []
    while len(colors) < n:
        c = _random_color(rng)
        if all(np.abs(c - o).sum() >= min_gap for o in colors):
            colors.append(c)
    return np.array(colors)


def make_image(kind: str, width: int, height: int, seed: int = 0,
               noise: float = 6.0) -> tuple[RawImage, LabelMap]:
    """One synthetic RGB image and its ground-truth segments.

    ``split``    two flat colors on either side of a random straight line
    ``gradient`` a linear color ramp with an elliptical object on top
    ``blocks``   Voronoi regions of distinct colors
    ``rects``    overlapping axis-aligned rectangles on a background

    Gaussian noise of standard deviation ``noise`` is added to every channel.
    """
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    if kind == "split":
        angle = rng.uniform(0, np.pi)
        cx, cy = rng.uniform(0.3, 0.7) * width, rng.uniform(0.3, 0.7) * height
        gt = ((xx - cx) * np.cos(angle) + (yy - cy) * np.sin(angle) > 0).astype(np.int32)
        rgb = _distinct_colors(rng, 2)[gt]
    elif kind == "gradient":
        c0, c1, obj = _distinct_colors(rng, 3, min_gap=90.0)
        t = (xx / max(width - 1, 1))[..., None]
        rgb = (1 - t) * c0 + t * c1
        cx, cy = rng.uniform(0.3, 0.7) * width, rng.uniform(0.3, 0.7) * height
        rx, ry = rng.uniform(0.1, 0.3) * width, rng.uniform(0.1, 0.3) * height
        gt = (((xx - cx) / rx) ** 2 + ((yy - cy) / ry) ** 2 <= 1.0).astype(np.int32)
        rgb[gt == 1] = obj
    elif kind == "blocks":
        n = int(rng.integers(6, 16))
        pts = rng.uniform(0, 1, size=(n, 2)) * [width, height]
        d2 = (xx[..., None] - pts[:, 0]) ** 2 + (yy[..., None] - pts[:, 1]) ** 2
        gt = np.argmin(d2, axis=-1).astype(np.int32)
        rgb = _distinct_colors(rng, n, min_gap=40.0)[gt]
    elif kind == "rects":
        n = int(rng.integers(4, 10))
        colors = _distinct_colors(rng, n + 1, min_gap=50.0)
        gt = np.zeros((height, width), dtype=np.int32)
        for r in range(1, n + 1):
            x0, y0 = rng.integers(0, width * 3 // 4), rng.integers(0, height * 3 // 4)
            w, h = rng.integers(width // 8, width // 2), rng.integers(height // 8, height // 2)
            gt[y0 : y0 + h, x0 : x0 + w] = r
        rgb = colors[gt]
    else:
        raise ValueError(f"unknown synthetic kind {kind!r}; choose from {KINDS}")
    if noise > 0:
        rgb = rgb + rng.normal(0.0, noise, size=rgb.shape)
    data = np.clip(np.rint(rgb), 0, 255).astype(np.uint8)
    _, gt = np.unique(gt, return_inverse=True)
    return RawImage.from_array(data), LabelMap.from_array(gt.reshape(height, width))


def default_corpus(n: int = 12, seed: int = 0, sizes=(64, 128, 192, 256, 384, 512)):
    """Deterministic list of ``(image_id, RawImage, LabelMap)`` cycling kinds and sizes."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        kind = KINDS[i % len(KINDS)]
        w = int(sizes[(i // len(KINDS) + i) % len(sizes)])
        h = int(max(64, round(w * rng.uniform(0.6, 1.0))))
        img, gt = make_image(kind, w, h, seed=int(rng.integers(0, 2**31)))
        out.append((f"{kind}_{i:03d}", img, gt))
    return out


def write_corpus(out_dir, corpus) -> tuple[Path, Path]:
    """Write images to ``out_dir/images/*.ppm`` and ground truth to ``out_dir/gt/*.pgm``."""
    from .io import write_image, write_label_map

    out_dir = Path(out_dir)
    img_dir, gt_dir = out_dir / "images", out_dir / "gt"
    img_dir.mkdir(parents=True, exist_ok=True)
    gt_dir.mkdir(parents=True, exist_ok=True)
    for image_id, img, gt in corpus:
        write_image(img, img_dir / f"{image_id}.ppm")
        write_label_map(gt, gt_dir / f"{image_id}.pgm")
    return img_dir, gt_dir
