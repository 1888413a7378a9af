import mpmath
import pytest

from zetaifs.config import PrecisionConfig
from zetaifs.reference_data import bundled_reference_table

# lines collected by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def cfg():
    return PrecisionConfig()


@pytest.fixture(scope="session")
def reference():
    return bundled_reference_table()


@pytest.fixture(scope="session")
def ref_zeros():
    """First 60 zero ordinates from an independent high-precision oracle."""
    with mpmath.workdps(30):
        return [mpmath.zetazero(n).imag for n in range(1, 61)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
