"""
Pytest configuration and fixtures.
Provides common test fixtures and setup.
"""
import os

import pytest

# Set test environment
os.environ["ENVIRONMENT"] = "development"
os.environ["LOG_LEVEL"] = "DEBUG"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: paper-scale runs (deselect with -m 'not slow')")


@pytest.fixture
def test_settings():
    """
    Fixture providing test settings.

    Returns:
        Settings instance with test configuration
    """
    from burgerslab.core.config import Settings

    return Settings(environment="development", workers=1)


@pytest.fixture
def presets():
    """Presets shipped in config/presets.yaml."""
    from burgerslab.core.models.config import load_presets

    return load_presets()


@pytest.fixture
def output_dir(tmp_path):
    """Run directory root inside the pytest temporary directory."""
    path = tmp_path / "runs"
    path.mkdir()
    return path
