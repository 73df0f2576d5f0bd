import pytest
from hypothesis import HealthCheck, settings

from riordan.config import get_settings

settings.register_profile(
    "riordan",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("riordan")


@pytest.fixture
def fresh_settings(monkeypatch):
    """Re-read settings after a test changes the environment."""
    get_settings.cache_clear()
    yield monkeypatch
    get_settings.cache_clear()
