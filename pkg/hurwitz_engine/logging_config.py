"""
Logging configuration for HurwitzForge.

Log records go to stderr; stdout carries only the CLI payload.
"""

from __future__ import annotations

import logging
import sys

PACKAGE_LOGGER = "hurwitz_engine"
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s - %(message)s"

_handler: logging.Handler | None = None


def setup_logging(level: str = "INFO") -> None:
    """
    Attach one stderr handler to the package logger and set its level.

    Later calls only change the level, so repeated CLI runs in one process
    never stack handlers.

    Args:
        level: Log level name (e.g. "DEBUG", "INFO", "WARNING", "ERROR").
    """
    global _handler

    numeric_level = getattr(logging, str(level).upper(), logging.INFO)
    logger = logging.getLogger(PACKAGE_LOGGER)

    if _handler is None:
        _handler = logging.StreamHandler(sys.stderr)
        _handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(_handler)
        logger.propagate = False

    logger.setLevel(numeric_level)
