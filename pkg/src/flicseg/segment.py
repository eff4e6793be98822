"""Algorithm dispatch."""

from .flic import run
from .slic import run_slic


def segment(features, config, observer=None, backend=None):
    """Run FLIC or SLIC according to ``config.algorithm``."""
    if config.algorithm == "slic":
        return run_slic(features, config, observer=observer, backend=backend)
    return run(features, config, observer=observer, backend=backend)
