"""
Stderr logging for scripts; stdout stays reserved for machine-readable summaries
"""

import logging
import sys
from typing import Optional

from .settings import DEFAULT_LOG_FORMAT

_HANDLER_NAME = "lfcoded-stderr"


def configure_logging(level: str = "INFO", fmt: Optional[str] = None) -> logging.Logger:
    """Install one stderr handler on the root logger; calling again only updates it"""
    root = logging.getLogger()
    handler = next((h for h in root.handlers if h.get_name() == _HANDLER_NAME), None)
    if handler is None:
        handler = logging.StreamHandler(sys.stderr)
        handler.set_name(_HANDLER_NAME)
        root.addHandler(handler)
    elif handler.stream is not sys.stderr:
        handler.setStream(sys.stderr)
    handler.setFormatter(logging.Formatter(fmt or DEFAULT_LOG_FORMAT))

    numeric = logging.getLevelName(level.upper())
    root.setLevel(numeric if isinstance(numeric, int) else logging.INFO)
    return root
