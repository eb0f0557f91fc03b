import pytest
from hypothesis import HealthCheck, settings

from quiverlab import load_fixture

settings.register_profile(
    "quiverlab",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("quiverlab")

FIXTURES = ["a2", "a3_sink", "empty", "kronecker", "kronecker_square", "linear_a3_zero", "loop_square_zero", "point", "triangle_zero"]


@pytest.fixture
def fixture_bq():
    def load(name):
        return load_fixture(name).bound_quiver()
    return load


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
