import os

import pytest
from hypothesis import HealthCheck, settings

from bimlab.constructions import catalog, catalog_instances

# every randomized test runs from the same seed unless told otherwise
SEED = int(os.environ.get("BIMLAB_SEED", "0"))

settings.register_profile("bimlab", derandomize=True, deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("bimlab")


def commutative_catalog(max_size: int) -> list[str]:
    return [s for s in catalog_instances(max_size) if catalog(s).is_commutative]


SMALL = commutative_catalog(5)
UP_TO_6 = commutative_catalog(6)


@pytest.fixture(scope="session")
def seed() -> int:
    return SEED


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
