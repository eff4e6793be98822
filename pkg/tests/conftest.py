import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from flicseg import kernels  # noqa: E402
from flicseg.synth import default_corpus  # noqa: E402

# Acceptance outcomes, printed in the terminal summary.
CRITERIA = {}


def pytest_addoption(parser):
    parser.addoption(
        "--bsds-dir",
        default=None,
        help="converted BSDS500 test set (images/*.ppm, gt/*.pgm) for the reproduction criterion",
    )


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[key])


@pytest.fixture
def record_criterion():
    def record(number, status, detail):
        line = f"criterion {number}: {status} - {detail}"
        CRITERIA[number] = line
        print(line)

    return record


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    return request.param


@pytest.fixture(scope="session")
def corpus():
    return default_corpus(12, seed=0)
