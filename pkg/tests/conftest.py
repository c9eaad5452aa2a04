"""Shared test configuration."""
import pytest


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for name in ("GRIDSPECTRA_THREADS", "GRIDSPECTRA_DENSE_CAP", "GRIDSPECTRA_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
