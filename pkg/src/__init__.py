"""
Tweet feature-engineering classifier - shared source code.
This package holds the library used by the CLI and the maintenance scripts.
"""
__version__ = "1.0.0"

__all__ = ["__version__"]
