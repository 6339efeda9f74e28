import mpmath
import pytest

from walker.config import get_settings


@pytest.fixture(autouse=True)
def working_precision():
    """Every test starts at 30 digits with freshly read settings."""
    get_settings.cache_clear()
    with mpmath.workdps(30):
        yield
    get_settings.cache_clear()
