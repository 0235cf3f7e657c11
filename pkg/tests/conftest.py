import pytest

from logpole.ladder import FrequencyProfile, choose_n0
from logpole.potential import PotentialModel
from logpole.quasimode import build_modes


def _setup(profile, d=3, span=7):
    n0 = choose_n0(profile, d)
    model = PotentialModel(profile=profile, d=d, n0=n0)
    return model, build_modes(model, range(n0, n0 + span))


@pytest.fixture(scope="session")
def desk160():
    """d=3 standard ladder with M=160 and seven calibrated levels."""
    return _setup(FrequencyProfile(M=160.0))


@pytest.fixture(scope="session")
def desk320():
    return _setup(FrequencyProfile(M=320.0))


@pytest.fixture(scope="session")
def model160(desk160):
    return desk160[0]


@pytest.fixture(scope="session")
def modes160(desk160):
    return desk160[1]


@pytest.fixture(scope="session")
def mode0(modes160):
    return modes160[0]


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
