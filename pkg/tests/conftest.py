import pytest

from squidchain import SQUID_C1, ChainConfig, InputCoupling, PreampBand, SecondStageDesign
from squidchain.second_stage import CRYO_RF, HIGH_SPEED_RT, MAGNICON_XXF1


@pytest.fixture
def coupling():
    # kappa^2 Lin = 1 nH
    return InputCoupling(Lin=100e-9, kappa=0.1)


@pytest.fixture
def tc_chain(coupling):
    return ChainConfig(SQUID_C1, coupling)


@pytest.fixture
def cryo_chain(coupling):
    return ChainConfig(
        SQUID_C1, coupling, SecondStageDesign(48, 3, T2=1.0), (PreampBand(5e6, 500e6, CRYO_RF),)
    )


@pytest.fixture
def rt_chain(coupling):
    bands = (PreampBand(0.0, 50e6, MAGNICON_XXF1), PreampBand(50e6, 300e6, HIGH_SPEED_RT))
    return ChainConfig(SQUID_C1, coupling, SecondStageDesign(16, 1, T2=1.0), bands)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_lines(request):
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
