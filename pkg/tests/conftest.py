import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ncdist import _kernels  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(params=sorted(_kernels.available_backends()))
def backend(request):
    return _kernels.available_backends()[request.param]


@pytest.fixture
def acceptance_log():
    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
