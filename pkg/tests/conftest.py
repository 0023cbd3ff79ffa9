import pytest

from wptmod import characteristics, scenario


@pytest.fixture(scope="session")
def repro_scenario():
    return scenario.load_scenario()


@pytest.fixture(scope="session")
def repro_sweeps(repro_scenario):
    return scenario.build_sweeps(repro_scenario)


@pytest.fixture(scope="session")
def repro_curves(repro_sweeps):
    return [characteristics.sweep_curve(spec) for spec in repro_sweeps]
