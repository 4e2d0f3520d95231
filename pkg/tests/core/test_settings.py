"""Tests for environment-driven settings."""
from pathlib import Path

import pytest

from src.core.exceptions import ConfigurationError
from src.core.settings import get_data_dir, get_log_level, get_seed


class TestSettings:
    """Test suite for environment settings."""

    def test_data_dir_override_wins(self, monkeypatch):
        """An explicit directory wins over TWEETCLS_DATA_DIR."""
        monkeypatch.setenv("TWEETCLS_DATA_DIR", "/from/env")
        assert get_data_dir("/from/flag") == Path("/from/flag")

    def test_data_dir_from_env(self, monkeypatch):
        """TWEETCLS_DATA_DIR is used without an override."""
        monkeypatch.setenv("TWEETCLS_DATA_DIR", "/from/env")
        assert get_data_dir() == Path("/from/env")

    def test_data_dir_default(self, monkeypatch):
        """Falls back to ./data."""
        monkeypatch.delenv("TWEETCLS_DATA_DIR", raising=False)
        assert get_data_dir() == Path("data")

    def test_seed_precedence(self, monkeypatch):
        """Flag, then environment, then manifest default."""
        monkeypatch.setenv("TWEETCLS_SEED", "11")
        assert get_seed(3, default=42) == 3
        assert get_seed(None, default=42) == 11
        monkeypatch.delenv("TWEETCLS_SEED")
        assert get_seed(None, default=42) == 42

    def test_seed_zero_is_an_explicit_value(self, monkeypatch):
        """Seed 0 is a real value, not a missing one."""
        monkeypatch.setenv("TWEETCLS_SEED", "11")
        assert get_seed(0) == 0

    def test_bad_seed_env_is_a_configuration_error(self, monkeypatch):
        """A non-integer TWEETCLS_SEED should raise ConfigurationError."""
        monkeypatch.setenv("TWEETCLS_SEED", "abc")
        with pytest.raises(ConfigurationError, match="TWEETCLS_SEED"):
            get_seed(None, default=5)
        assert get_seed(9, default=5) == 9

    def test_log_level(self, monkeypatch):
        """Log level defaults to WARNING and is upper-cased."""
        monkeypatch.delenv("TWEETCLS_LOG_LEVEL", raising=False)
        assert get_log_level() == "WARNING"
        monkeypatch.setenv("TWEETCLS_LOG_LEVEL", "debug")
        assert get_log_level() == "DEBUG"
