"""
Environment-driven settings.

Values come from the process environment, optionally seeded from a `.env`
file in the working directory.
"""
import os
from pathlib import Path
from typing import Optional

from src.core.exceptions import ConfigurationError

# Load dotenv only if available; plain env vars work without it
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

DATA_DIR_ENV = "TWEETCLS_DATA_DIR"
SEED_ENV = "TWEETCLS_SEED"
LOG_LEVEL_ENV = "TWEETCLS_LOG_LEVEL"

DEFAULT_DATA_DIR = "data"


def get_data_dir(override: Optional[str] = None) -> Path:
    """
    Resolve the directory holding the dataset CSVs.

    Args:
        override: Explicit directory (e.g. from --data-dir); wins over the environment.

    Returns:
        Path to the data directory (not checked for existence)
    """
    if override:
        return Path(override)
    return Path(os.getenv(DATA_DIR_ENV, DEFAULT_DATA_DIR))


def get_seed(override: Optional[int] = None, default: int = 42) -> int:
    """
    Resolve the seed: explicit flag, then TWEETCLS_SEED, then the manifest default.

    Raises:
        ConfigurationError: If TWEETCLS_SEED is set but is not an integer
    """
    if override is not None:
        return override
    raw = os.getenv(SEED_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ConfigurationError(f"{SEED_ENV} must be an integer, got {raw!r}")
    return default


def get_log_level() -> str:
    """Log level name from TWEETCLS_LOG_LEVEL (default WARNING)."""
    return os.getenv(LOG_LEVEL_ENV, "WARNING").upper()
