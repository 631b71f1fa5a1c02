import pytest

from helpers import load_bundled


@pytest.fixture(scope="session")
def rayleigh_config():
    """Bundled Rayleigh/omni scenario; every closed form applies to it."""
    return load_bundled("scenario1")


@pytest.fixture(scope="session")
def directional_config():
    """Bundled sector/blockage scenario with a deterministic channel."""
    return load_bundled("scenario2")
