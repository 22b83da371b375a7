import pytest
from mpmath import mp

import cftinv as ci


@pytest.fixture(autouse=True)
def _default_precision():
    old = mp.dps
    mp.dps = 50
    yield
    mp.dps = old


@pytest.fixture(scope="session")
def model3():
    with mp.workdps(50):
        return ci.build_minimal_model(3)


@pytest.fixture(scope="session")
def model4():
    with mp.workdps(50):
        return ci.build_minimal_model(4)


@pytest.fixture(scope="session")
def md3(model3):
    with mp.workdps(50):
        return ci.modular_matrices(model3)


@pytest.fixture(scope="session")
def md4(model4):
    with mp.workdps(50):
        return ci.modular_matrices(model4)


@pytest.fixture(scope="session")
def series3(model3):
    """Cutoff large enough for direct evaluation down to t = 0.3."""
    with mp.workdps(50):
        return ci.all_character_series(model3, 2000)


@pytest.fixture(scope="session")
def series4(model4):
    with mp.workdps(50):
        return ci.all_character_series(model4, 2000)


@pytest.fixture(scope="session")
def series3_small(model3):
    """Short series: plenty for the transform route at small t."""
    with mp.workdps(50):
        return ci.all_character_series(model3, 120)


@pytest.fixture(scope="session")
def series4_small(model4):
    with mp.workdps(50):
        return ci.all_character_series(model4, 120)
