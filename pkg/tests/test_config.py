"""Tests for process settings."""

import pytest
from pydantic import ValidationError

from defect_nls.config import Settings, get_version
from defect_nls.utils import resolve_threads


def test_defaults():
    """Test the shipped numerical thresholds."""
    settings = Settings()
    assert settings.APP_NAME == "defect-nls"
    assert settings.IM_THETA_CAP == 700.0
    assert settings.FD_STEP == 1e-3


def test_environment_override(monkeypatch):
    """Test that DEFECT_NLS_ variables override the defaults."""
    monkeypatch.setenv("DEFECT_NLS_THREADS", "3")
    monkeypatch.setenv("DEFECT_NLS_LOG_LEVEL", "DEBUG")
    settings = Settings()
    assert settings.THREADS == 3
    assert settings.LOG_LEVEL == "DEBUG"


def test_negative_threads_rejected(monkeypatch):
    """Test that a negative worker cap is refused."""
    monkeypatch.setenv("DEFECT_NLS_THREADS", "-1")
    with pytest.raises(ValidationError):
        Settings()


def test_version_from_file():
    """Test that the version comes from version.txt."""
    assert get_version() == "0.1.0"


def test_resolve_threads():
    """Test an explicit cap and the automatic case."""
    assert resolve_threads(2) == 2
    assert resolve_threads(0) >= 1
