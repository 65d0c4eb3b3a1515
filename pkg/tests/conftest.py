import sys
from pathlib import Path

# let tests import the naive simulator in tests/reference.py
sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


try:
    from hypothesis import settings

    # fixed example sequences keep the suite reproducible run to run
    settings.register_profile("repro", derandomize=True, print_blob=True)
    settings.load_profile("repro")
except ImportError:  # hypothesis is only needed by test_properties
    pass
