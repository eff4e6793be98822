"""Netpbm (P6 images, P5 label maps) and CSV label-map I/O, plus boundary overlays."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import FormatError, InvalidConfigurationError
from .imagecore import LabelMap, RawImage
from .metrics import boundary_mask

_WHITESPACE = b" \t\r\n\v\f"


def _parse_header(data: bytes, magic: bytes, n_fields: int, path) -> tuple[list[int], int]:
    """Parse the numeric header fields after ``magic``; returns (fields, data offset)."""
    if data[:2] != magic:
        raise FormatError(f"{path}: expected magic {magic.decode()} at byte 0, found {data[:2]!r}")
    pos = 2
    fields = []
    while len(fields) < n_fields:
        while pos < len(data) and (data[pos] in _WHITESPACE or data[pos] == ord("#")):
            if data[pos] == ord("#"):
                while pos < len(data) and data[pos] not in b"\r\n":
                    pos += 1
            else:
                pos += 1
        if pos >= len(data):
            raise FormatError(f"{path}: header truncated at byte {pos}")
        start = pos
        while pos < len(data) and data[pos] not in _WHITESPACE and data[pos] != ord("#"):
            pos += 1
        token = data[start:pos]
        if not token.isdigit():
            raise FormatError(f"{path}: malformed header field {token!r} at byte {start}")
        fields.append(int(token))
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise FormatError(f"{path}: expected a single whitespace byte after header at byte {pos}")
    return fields, pos + 1


def read_image(path) -> RawImage:
    """Decode a binary PPM (P6) file with maxval 255."""
    data = Path(path).read_bytes()
    (width, height, maxval), offset = _parse_header(data, b"P6", 3, path)
    if maxval != 255:
        raise FormatError(
            f"{path}: unsupported maxval {maxval} (only 8-bit, maxval 255) in header before byte {offset}"
        )
    expected = width * height * 3
    payload = data[offset : offset + expected]
    if len(payload) < expected:
        raise FormatError(
            f"{path}: truncated pixel data at byte {offset + len(payload)}, "
            f"expected {expected} bytes from byte {offset}"
        )
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
    return RawImage(width=width, height=height, data=pixels)


def write_image(img: RawImage, path):
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + img.data.tobytes())


def _infer_format(path) -> str:
    return "csv" if Path(path).suffix.lower() == ".csv" else "pgm16"


def write_label_map(labels: LabelMap, path, format: str | None = None):
    """Write labels as ``pgm16`` (P5, maxval 65535, big-endian) or ``csv``.

    The format defaults to ``csv`` for a ``.csv`` suffix and ``pgm16`` otherwise.
    """
    format = format or _infer_format(path)
    lab = labels.labels
    if format == "pgm16":
        if lab.size and (lab.min() < 0 or lab.max() > 65535):
            raise InvalidConfigurationError(
                f"label values must lie in [0, 65535] for pgm16, got [{lab.min()}, {lab.max()}]"
            )
        header = f"P5\n{labels.width} {labels.height}\n65535\n".encode("ascii")
        Path(path).write_bytes(header + lab.astype(">u2").tobytes())
    elif format == "csv":
        body = "".join(",".join(map(str, row)) + "\n" for row in lab.tolist())
        Path(path).write_text(body, newline="")
    else:
        raise ValueError(f"unknown label map format {format!r}")


def read_label_map(path) -> LabelMap:
    """Read a label map written by :func:`write_label_map` (format is sniffed).

    8-bit PGM (maxval < 256) is accepted too, for converted ground truth.
    """
    data = Path(path).read_bytes()
    if data[:2] == b"P5":
        (width, height, maxval), offset = _parse_header(data, b"P5", 3, path)
        if not 0 < maxval <= 65535:
            raise FormatError(f"{path}: unsupported maxval {maxval} before byte {offset}")
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
        expected = width * height * dtype.itemsize
        payload = data[offset : offset + expected]
        if len(payload) < expected:
            raise FormatError(
                f"{path}: truncated sample data at byte {offset + len(payload)}, "
                f"expected {expected} bytes from byte {offset}"
            )
        lab = np.frombuffer(payload, dtype=dtype).reshape(height, width)
        return LabelMap(width=width, height=height, labels=lab.astype(np.int32))
    return _read_csv_labels(data, path)


def _read_csv_labels(data: bytes, path) -> LabelMap:
    rows = []
    offset = 0
    for line in data.splitlines(keepends=True):
        text = line.strip()
        if text:
            try:
                rows.append([int(v) for v in text.split(b",")])
            except ValueError:
                raise FormatError(f"{path}: non-integer label in row {len(rows)} at byte {offset}")
            if len(rows[-1]) != len(rows[0]):
                raise FormatError(
                    f"{path}: row {len(rows) - 1} at byte {offset} has {len(rows[-1])} "
                    f"values, expected {len(rows[0])}"
                )
        offset += len(line)
    if not rows:
        raise FormatError(f"{path}: empty label map at byte 0")
    return LabelMap.from_array(np.array(rows, dtype=np.int32))


def render_overlay(img: RawImage, labels: LabelMap, color=(255, 0, 0)) -> RawImage:
    """Copy of ``img`` with superpixel boundary pixels painted ``color``."""
    if (img.width, img.height) != (labels.width, labels.height):
        raise InvalidConfigurationError(
            f"image is {img.width}x{img.height} but labels are {labels.width}x{labels.height}"
        )
    out = img.data.copy()
    out[boundary_mask(labels).mask] = np.asarray(color, dtype=np.uint8)
    return RawImage(width=img.width, height=img.height, data=out)
