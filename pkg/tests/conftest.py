import pytest
from hypothesis import HealthCheck, settings

from rmwave.model import KineticsSpec, ModelParams

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# filled by test_acceptance, echoed at the end of the run
ACCEPTANCE_LINES = {}


@pytest.fixture
def ref():
    return ModelParams()


@pytest.fixture
def arrhenius():
    return ModelParams(kinetics=KineticsSpec.arrhenius(1.0))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
