import warnings

import pytest

from raqsim.config import default_config_dict, parse_config
from raqsim.errors import WeakProbeWarning

# The template probe drive sits just above the |2> linewidth, so the
# weak-probe advisory fires on every front-end build; tests assert it
# explicitly where it matters.
warnings.simplefilter("ignore", WeakProbeWarning)


@pytest.fixture(scope="session")
def default_config():
    return parse_config(default_config_dict())


@pytest.fixture(scope="session")
def raq_frontend(default_config):
    return default_config.raq_frontend()


@pytest.fixture(scope="session")
def mmimo_fe(default_config):
    return default_config.mmimo_frontend()
