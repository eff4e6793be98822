"""Time the compiled and pure-Python kernels on the same FLIC and SLIC runs.

    python benchmarks/compare_backends.py [--sizes 128,256,481x321] [--k 200] [--repeats 3]

Prints one CSV row per (backend, algorithm, size) with the best wall time
and checks that both backends return identical label maps.
"""

import argparse
import csv
import sys

from flicseg import SegmentationConfig, kernels, segment, srgb_to_feature_image
from flicseg.synth import make_image


def parse_size(text):
    w, _, h = text.partition("x")
    return int(w), int(h or w)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="128,256,481x321")
    parser.add_argument("--k", type=int, default=200)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--algorithms", default="flic,slic")
    args = parser.parse_args(argv)

    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["algorithm", "width", "height", "k", "backend", "seconds", "speedup"])
    for size in args.sizes.split(","):
        w, h = parse_size(size)
        img, _ = make_image("blocks", w, h, seed=w * h)
        feats = srgb_to_feature_image(img)
        for algorithm in args.algorithms.split(","):
            cfg = SegmentationConfig.defaults(algorithm, k_requested=args.k)
            best, labels = {}, {}
            for name in sorted(kernels.BACKENDS, reverse=True):
                runs = [segment(feats, cfg, backend=name) for _ in range(args.repeats)]
                best[name] = min(r.seconds for r in runs)
                labels[name] = runs[0].labels
            base = best["python"]
            for name, seconds in best.items():
                writer.writerow([algorithm, w, h, args.k, name, f"{seconds:.4f}",
                                 f"{base / seconds:.1f}"])
            if len(set(map(bytes, (lab.labels for lab in labels.values())))) != 1:
                print(f"backends disagree on {algorithm} {w}x{h}", file=sys.stderr)
                return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
