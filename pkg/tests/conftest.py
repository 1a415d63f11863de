import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture()
def home_world():
    from edgebot.world import find_scenario, load_scenario_file

    return load_scenario_file(find_scenario("home"), seed=7)


@pytest.fixture()
def office_world():
    from edgebot.world import find_scenario, load_scenario_file

    return load_scenario_file(find_scenario("office"), seed=7)


@pytest.fixture()
def minimal_world():
    from edgebot.world import find_scenario, load_scenario_file

    return load_scenario_file(find_scenario("minimal"), seed=7)
