"""
Core infrastructure for the tweet classification toolkit.
Provides exceptions, environment settings and table rendering shared by all
packages. The dataset manifest lives in src.core.manifest.
"""
from src.core.exceptions import (
    ConfigurationError,
    DatasetNotFoundError,
    DataError,
    AcceptanceError,
    ConvergenceWarning,
)
from src.core.settings import get_data_dir, get_seed, get_log_level

__all__ = [
    "ConfigurationError",
    "DatasetNotFoundError",
    "DataError",
    "AcceptanceError",
    "ConvergenceWarning",
    "get_data_dir",
    "get_seed",
    "get_log_level",
]
