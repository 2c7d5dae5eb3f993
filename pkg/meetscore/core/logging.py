"""
Logging setup shared by the CLI and the HTTP app
"""

import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

from .config import settings

_handler: Optional[logging.Handler] = None


def setup_logging(level: Optional[str] = None) -> logging.Logger:
    """Attach a single stderr RichHandler to the package logger."""
    global _handler
    logger = logging.getLogger("meetscore")
    logger.setLevel((level or settings.LOG_LEVEL).upper())
    if _handler is None:
        _handler = RichHandler(
            console=Console(stderr=True),
            show_path=False,
            rich_tracebacks=True,
        )
        _handler.setFormatter(logging.Formatter("%(message)s"))
        logger.addHandler(_handler)
        logger.propagate = False
    return logger
