import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from relevantscan import _backend  # noqa: E402


@pytest.fixture(params=_backend.available())
def backend(request):
    """Run the test once per available kernel backend."""
    previous = _backend.kernels
    _backend.set_backend(request.param)
    yield request.param
    _backend.kernels = previous


def pytest_terminal_summary(terminalreporter):
    from _acceptance_log import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
