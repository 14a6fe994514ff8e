"""
Logging setup shared by the CLI, the demo script and both protocol parties.

Console output is level-coloured; the log file always captures DEBUG and
records the thread name so Alice's and Bob's lines can be told apart when
both run in one process.
"""

import logging
import sys
from pathlib import Path
from typing import Optional

import colorlog

from config import get_settings

LEVEL_COLORS = {
    "DEBUG": "cyan",
    "INFO": "green",
    "WARNING": "yellow",
    "ERROR": "red",
    "CRITICAL": "red,bg_white",
}

CONSOLE_FORMAT = "%(log_color)s%(levelname)-8s%(reset)s %(blue)s%(name)s%(reset)s - %(message)s"
FILE_FORMAT = "%(asctime)s - %(threadName)s - %(name)s - %(levelname)s - %(message)s"


def _console_handler(level: int) -> logging.Handler:
    # stdout carries reports and JSON output
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(colorlog.ColoredFormatter(CONSOLE_FORMAT, log_colors=LEVEL_COLORS))
    return handler


def _file_handler(path: Path) -> logging.Handler:
    handler = logging.FileHandler(path, encoding="utf-8")
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
    return handler


def setup_logging(log_level: str = "INFO", log_dir: Optional[str] = None) -> Path:
    """
    Configure the root logger.

    Args:
        log_level: Console level name (DEBUG, INFO, WARNING, ERROR)
        log_dir: Directory for the log file; the configured one when omitted

    Returns:
        Path of the log file
    """
    settings = get_settings()
    directory = Path(log_dir or settings.log_dir)
    directory.mkdir(parents=True, exist_ok=True)
    log_file = directory / settings.log_file

    level = getattr(logging, log_level.upper())
    root = logging.getLogger()
    # the file handler needs DEBUG records even when the console is quieter
    root.setLevel(min(level, logging.DEBUG))
    root.handlers = [_console_handler(level), _file_handler(log_file)]
    return log_file
