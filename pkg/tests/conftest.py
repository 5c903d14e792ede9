import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from scatterbound.oracles import oracle_partial_waves  # noqa: E402
from scatterbound.potentials import square_well  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# acceptance outcomes, printed once at the end of the session
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def well():
    """Attractive square well, depth -1 and radius 1."""
    return square_well(-1.0, 1.0)


@pytest.fixture(scope="session")
def well_oracle(well):
    return oracle_partial_waves(well, 1.0, 1.0, lmax=8)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
