"""
Logging setup for idexp.

All log output goes to stderr; stdout is reserved for JSON reports.
Level names are coloured with ANSI codes when stderr is a terminal.
"""

import logging
import sys
from typing import Optional

from . import config


class Colors:
    """ANSI color codes for terminal output"""
    RED = '\033[31m'
    GREEN = '\033[32m'
    YELLOW = '\033[33m'
    CYAN = '\033[36m'
    BRIGHT_BLACK = '\033[90m'
    BRIGHT_RED = '\033[91m'

    BOLD = '\033[1m'
    RESET = '\033[0m'


LEVEL_COLORS = {
    logging.DEBUG: Colors.BRIGHT_BLACK,
    logging.INFO: Colors.CYAN,
    logging.WARNING: Colors.YELLOW,
    logging.ERROR: Colors.RED,
    logging.CRITICAL: Colors.BOLD + Colors.BRIGHT_RED,
}

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


class ColorFormatter(logging.Formatter):
    """Formatter that wraps the level name in the palette colour for that level."""

    def __init__(self, fmt: str = LOG_FORMAT, use_color: bool = True):
        super().__init__(fmt)
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        if not self.use_color:
            return super().format(record)
        original = record.levelname
        color = LEVEL_COLORS.get(record.levelno, "")
        record.levelname = f"{color}{original}{Colors.RESET}"
        try:
            return super().format(record)
        finally:
            record.levelname = original


def setup_logging(level: Optional[str] = None) -> logging.Logger:
    """Configure the ``idexp`` logger once; later calls only adjust the level."""
    logger = logging.getLogger("idexp")
    logger.setLevel((level or config.LOG_LEVEL).upper())
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(ColorFormatter(use_color=sys.stderr.isatty()))
        logger.addHandler(handler)
        logger.propagate = False
    return logger
