"""
    Author: julij.jegorov
    Date: 17/10/2026
    Description: Pytest configuration; filters known third-party warnings and keeps the
                 shared Settings singleton on the shipped futurecone.json between tests.
"""

import warnings

import pytest

# Apply filters early so they apply to test collection and imports
warnings.filterwarnings(
    "ignore",
    category=DeprecationWarning,
    module="matplotlib.*",
)
warnings.filterwarnings(
    "ignore",
    category=DeprecationWarning,
    message=r".*scipy\.spatial\.qhull.*",
)
warnings.filterwarnings(
    "ignore",
    category=UserWarning,
    message=r".*non-GUI backend.*",
)


@pytest.fixture(autouse=True)
def _fresh_settings():
    from futurecone.libs.config import Settings
    Settings().reload()
    yield
    Settings().reload()
