"""Command-line interface: ``segment``, ``eval``, ``bench`` and ``synth``."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import bench
from .colorspace import srgb_to_feature_image
from .errors import FlicError
from .imagecore import SegmentationConfig
from .io import read_image, read_label_map, render_overlay, write_image, write_label_map
from .metrics import evaluate
from .segment import segment
from .synth import default_corpus, write_corpus

SCAN_NAMES = {"bf": "back-and-forth", "forward": "forward"}


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _str_list(text):
    return [v.strip() for v in text.split(",") if v.strip()]


def _on_off(text):
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError(f"expected 'on' or 'off', got {text!r}")
    return text == "on"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flicseg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="segment one PPM image into superpixels")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--superpixels", required=True, type=int)
    p.add_argument("--compactness", type=float, default=5.0)
    p.add_argument("--iterations", type=int, default=None,
                   help="default: 2 for flic, 10 for slic")
    p.add_argument("--neighborhood", type=int, choices=(4, 8), default=4)
    p.add_argument("--scan", choices=sorted(SCAN_NAMES), default="bf")
    p.add_argument("--update", choices=("joint", "separate"), default="joint")
    p.add_argument("--algorithm", choices=("flic", "slic"), default="flic")
    p.add_argument("--enforce-connectivity", type=_on_off, default=None,
                   metavar="on|off", help="default: off for flic, on for slic")
    p.add_argument("--labels-out", required=True, type=Path)
    p.add_argument("--overlay-out", type=Path)
    p.add_argument("--stats-out", type=Path)

    p = sub.add_parser("eval", help="score a label map against ground truth")
    p.add_argument("--labels", required=True, type=Path)
    p.add_argument("--ground-truth", required=True, type=Path)
    p.add_argument("--epsilon", type=float, default=2.0)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("bench", help="sweep settings over a directory of images")
    p.add_argument("--input-dir", required=True, type=Path)
    p.add_argument("--gt-dir", required=True, type=Path)
    p.add_argument("--k-list", required=True, type=_int_list)
    p.add_argument("--m-list", type=_float_list, default=[5.0])
    p.add_argument("--iter-list", type=_int_list, default=None)
    p.add_argument("--algorithms", type=_str_list, default=["flic"])
    p.add_argument("--neighborhoods", type=_int_list, default=[4])
    p.add_argument("--scans", type=_str_list, default=["bf"])
    p.add_argument("--updates", type=_str_list, default=["joint"])
    p.add_argument("--epsilon", type=float, default=2.0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("synth", help="write the synthetic corpus (images/ and gt/)")
    p.add_argument("--out-dir", required=True, type=Path)
    p.add_argument("--count", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    return parser


def cmd_segment(args) -> int:
    img = read_image(args.input)
    config = SegmentationConfig.defaults(
        args.algorithm,
        k_requested=args.superpixels,
        compactness=args.compactness,
        iterations=args.iterations,
        neighborhood=args.neighborhood,
        scan_mode=SCAN_NAMES[args.scan],
        update_mode=args.update,
        enforce_connectivity=args.enforce_connectivity,
    )
    result = segment(srgb_to_feature_image(img), config)
    write_label_map(result.labels, args.labels_out)
    if args.overlay_out:
        write_image(render_overlay(img, result.labels), args.overlay_out)
    if args.stats_out:
        with open(args.stats_out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["image_id", "algorithm", "k_requested", "k_actual",
                             "iteration", "label_changes", "seconds"])
            for itr, n in enumerate(result.label_changes, start=1):
                writer.writerow([args.input.stem, config.algorithm, config.k_requested,
                                 result.k_actual, itr, n, repr(result.seconds)])
    return 0


def cmd_eval(args) -> int:
    seg = read_label_map(args.labels)
    gt = read_label_map(args.ground_truth)
    report = evaluate(seg, gt, args.epsilon)
    row = bench.BenchRow(
        image_id=args.labels.stem, algorithm=None, k_requested=None, k_actual=seg.n_labels,
        compactness=None, iterations=None, neighborhood=None, scan=None, update=None,
        br=report.br, ue=report.ue, asa=report.asa, seconds=None,
    )
    bench.write_rows([row], args.out)
    return 0


def cmd_bench(args) -> int:
    unknown = [s for s in args.scans if s not in SCAN_NAMES]
    if unknown:
        raise ValueError(f"unknown scan mode(s) {unknown}; use bf or forward")
    images = bench.load_dataset(args.input_dir, args.gt_dir)
    configs = bench.config_grid(
        args.k_list, args.m_list, args.iter_list, args.algorithms,
        args.neighborhoods, [SCAN_NAMES[s] for s in args.scans], args.updates,
    )
    rows = bench.run_bench(images, configs, args.epsilon, jobs=args.jobs)
    bench.write_rows(rows, args.out)
    return 0


def cmd_synth(args) -> int:
    write_corpus(args.out_dir, default_corpus(args.count, args.seed))
    return 0


COMMANDS = {"segment": cmd_segment, "eval": cmd_eval, "bench": cmd_bench, "synth": cmd_synth}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (FlicError, OSError, ValueError) as exc:
        print(f"flicseg {args.command}: error: {exc}", file=sys.stderr)
        return 1
