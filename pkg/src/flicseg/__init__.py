"""FLIC superpixel segmentation with a SLIC baseline and BR/UE/ASA metrics."""

from .colorspace import srgb_to_feature_image, srgb_to_lab
from .errors import (
    CorruptLabelsError,
    FlicError,
    FormatError,
    InvalidConfigurationError,
    UndefinedMetricError,
)
from .flic import (
    EngineState,
    SegmentationResult,
    assign_pixel,
    distance,
    enforce_connectivity,
    perturb_seeds,
    run,
    traverse_superpixel,
)
from .imagecore import (
    FeatureImage,
    GridSpec,
    LabelMap,
    RawImage,
    SegmentationConfig,
    SuperpixelState,
    grid_init,
    init_superpixel_states,
)
from .kernels import get_backend
from .metrics import (
    MetricReport,
    achievable_segmentation_accuracy,
    boundary_mask,
    boundary_recall,
    evaluate,
    undersegmentation_error,
)
from .segment import segment
from .slic import run_slic

__version__ = "0.1.0"
