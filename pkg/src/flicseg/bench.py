"""Benchmark harness: cartesian sweeps of segmentation settings scored with BR/UE/ASA."""

from __future__ import annotations

import csv
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Optional

from .colorspace import srgb_to_feature_image
from .errors import FormatError
from .imagecore import SegmentationConfig
from .io import read_image, read_label_map
from .metrics import evaluate
from .segment import segment


@dataclass(frozen=True)
class BenchRow:
    image_id: str
    algorithm: Optional[str]
    k_requested: Optional[int]
    k_actual: int
    compactness: Optional[float]
    iterations: Optional[int]
    neighborhood: Optional[int]
    scan: Optional[str]
    update: Optional[str]
    br: float
    ue: float
    asa: float
    seconds: Optional[float]

    @classmethod
    def header(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_csv(self) -> list[str]:
        return ["" if v is None else repr(v) if isinstance(v, float) else str(v)
                for v in astuple(self)]

    @classmethod
    def from_csv(cls, record: dict) -> BenchRow:
        kwargs = {}
        for f in fields(cls):
            raw = record[f.name]
            if raw == "":
                kwargs[f.name] = None
            elif f.type in ("int", "Optional[int]"):
                kwargs[f.name] = int(raw)
            elif f.type in ("float", "Optional[float]"):
                kwargs[f.name] = float(raw)
            else:
                kwargs[f.name] = raw
        return cls(**kwargs)

    def sort_key(self):
        return tuple("" if v is None else v for v in astuple(self)[:9])


def write_rows(rows, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(BenchRow.header())
        for row in rows:
            writer.writerow(row.to_csv())


def read_rows(path) -> list[BenchRow]:
    with open(path, newline="") as fh:
        return [BenchRow.from_csv(rec) for rec in csv.DictReader(fh)]


def score(image_id, img, gt, config: SegmentationConfig, epsilon: float = 2.0,
          backend=None) -> BenchRow:
    """Segment one image and score it; ``seconds`` times the clustering call only."""
    features = srgb_to_feature_image(img)
    result = segment(features, config, backend=backend)
    report = evaluate(result.labels, gt, epsilon)
    return BenchRow(
        image_id=image_id,
        algorithm=config.algorithm,
        k_requested=config.k_requested,
        k_actual=result.k_actual,
        compactness=float(config.compactness),
        iterations=config.iterations,
        neighborhood=config.neighborhood,
        scan=config.scan_mode,
        update=config.update_mode,
        br=report.br,
        ue=report.ue,
        asa=report.asa,
        seconds=result.seconds,
    )


def config_grid(k_list, m_list=(5.0,), iter_list=None, algorithms=("flic",),
                neighborhoods=(4,), scans=("back-and-forth",), updates=("joint",)):
    """All configurations of the cartesian product; ``iter_list=None`` uses each
    algorithm's default iteration count."""
    configs = []
    for alg, k, m, nb, scan, upd in itertools.product(
        algorithms, k_list, m_list, neighborhoods, scans, updates
    ):
        for itr in iter_list or [None]:
            configs.append(SegmentationConfig.defaults(
                alg, k_requested=k, compactness=float(m), iterations=itr,
                neighborhood=nb, scan_mode=scan, update_mode=upd,
            ))
    return configs


def _score_job(args):
    return score(*args)


def run_bench(images, configs, epsilon: float = 2.0, jobs: int = 1) -> list[BenchRow]:
    """Score every ``(image_id, RawImage, gt)`` under every config; rows come back sorted."""
    work = [(iid, img, gt, cfg, epsilon) for iid, img, gt in images for cfg in configs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_score_job, work))
    else:
        rows = [_score_job(w) for w in work]
    return sorted(rows, key=BenchRow.sort_key)


def find_ground_truth(gt_dir: Path, image_id: str) -> Path:
    for suffix in (".pgm", ".csv"):
        candidate = gt_dir / f"{image_id}{suffix}"
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"no ground truth {image_id}.pgm or {image_id}.csv in {gt_dir}")


def load_dataset(input_dir, gt_dir):
    """Pair every ``*.ppm`` in ``input_dir`` with its ground-truth label map."""
    input_dir, gt_dir = Path(input_dir), Path(gt_dir)
    paths = sorted(input_dir.glob("*.ppm"))
    if not paths:
        raise FileNotFoundError(f"no .ppm images in {input_dir}")
    images = []
    for path in paths:
        img = read_image(path)
        gt = read_label_map(find_ground_truth(gt_dir, path.stem))
        if (gt.width, gt.height) != (img.width, img.height):
            raise FormatError(
                f"{path.stem}: image is {img.width}x{img.height}, ground truth {gt.width}x{gt.height}"
            )
        images.append((path.stem, img, gt))
    return images
