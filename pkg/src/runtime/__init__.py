"""
Process-level settings and logging
"""

from .logging_setup import configure_logging
from .settings import Settings, load_settings

__all__ = ["Settings", "configure_logging", "load_settings"]
