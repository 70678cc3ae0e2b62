import numpy as np
import pytest

from expfam_div import catalog


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: full acceptance-gate criteria")


CATALOG_IDS = [fam.family_id for fam in catalog()]


def catalog_params():
    """ids double as readable pytest ids for per-family parametrization."""
    return pytest.mark.parametrize("fam", catalog(), ids=CATALOG_IDS)
