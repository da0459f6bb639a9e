import numpy as np
import pytest

from hmct import LatticeConfig, make_gaussian_pulse
from hmct.kernels import BACKENDS


@pytest.fixture(scope="session")
def cfg():
    return LatticeConfig()


@pytest.fixture(scope="session")
def pulse(cfg):
    return make_gaussian_pulse(cfg)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    return BACKENDS[request.param]


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


# filled by the acceptance tests, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[2])):
            terminalreporter.write_line(line)
