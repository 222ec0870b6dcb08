import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from euler_transforms.geometry import Polygon, Scene

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# acceptance outcomes, printed once at the end of the session
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def unit_square():
    return Polygon.rectangle((0.0, 0.0), 0.5, 0.5)


@pytest.fixture
def l_shape():
    return Polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])


@pytest.fixture
def disk_scene():
    return Scene.of(Polygon.regular((0.5, 0.5), 0.3, 128))
