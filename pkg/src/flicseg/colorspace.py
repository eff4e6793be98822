"""sRGB (8-bit) to CIELAB conversion under a D65 white point."""

import numpy as np

from .imagecore import FeatureImage, RawImage

# Linear sRGB -> XYZ, D65 (IEC 61966-2-1).
SRGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
# White taken from the matrix row sums so the gray axis lands exactly on a = b = 0.
D65_WHITE = SRGB_TO_XYZ.sum(axis=1)

_DELTA = 6.0 / 29.0

# Features are snapped to multiples of 2**-20 so that per-superpixel sums of
# up to 2**24 pixels stay exact in float64.
FEATURE_QUANTUM = 2.0**-20


def _linearize_lut() -> np.ndarray:
    c = np.arange(256, dtype=np.float64) / 255.0
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)


_LINEAR = _linearize_lut()


def _lab_f(t):
    return np.where(t > _DELTA**3, np.cbrt(t), t / (3 * _DELTA**2) + 4.0 / 29.0)


def srgb_to_lab(rgb) -> np.ndarray:
    """Convert an (..., 3) uint8 sRGB array to float64 CIELAB (L in [0, 100])."""
    rgb = np.asarray(rgb, dtype=np.uint8)
    lin = _LINEAR[rgb]
    xyz = lin @ SRGB_TO_XYZ.T
    f = _lab_f(xyz / D65_WHITE)
    lab = np.empty_like(f)
    lab[..., 0] = 116.0 * f[..., 1] - 16.0
    lab[..., 1] = 500.0 * (f[..., 0] - f[..., 1])
    lab[..., 2] = 200.0 * (f[..., 1] - f[..., 2])
    return lab


def quantize(values: np.ndarray) -> np.ndarray:
    return np.round(values / FEATURE_QUANTUM) * FEATURE_QUANTUM


def srgb_to_feature_image(img: RawImage) -> FeatureImage:
    """Lab features with pixel coordinates attached, on the exact-sum grid."""
    return FeatureImage.from_lab(quantize(srgb_to_lab(img.data)))
