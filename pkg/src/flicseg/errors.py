"""Exception types raised across the package."""


class FlicError(Exception):
    """Base class for all package errors."""


class InvalidConfigurationError(FlicError, ValueError):
    """Image dimensions or segmentation parameters are out of range."""


class CorruptLabelsError(FlicError, ValueError):
    """A label map references a superpixel that does not exist."""


class UndefinedMetricError(FlicError, ValueError):
    """A metric has no defined value for the given inputs."""


class FormatError(FlicError, ValueError):
    """A file could not be decoded in one of the supported formats."""
