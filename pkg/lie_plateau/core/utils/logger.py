"""
Logger utility for LiePlateau
"""
import logging
import sys

from lie_plateau.core.constants import LOG_FORMAT, LOG_DATE_FORMAT

PACKAGE_LOGGER = "lie_plateau"


def get_logger(name: str = PACKAGE_LOGGER, level: str = "INFO") -> logging.Logger:
    """Get configured logger instance"""

    logger = logging.getLogger(name)

    # Avoid adding multiple handlers
    if logger.handlers:
        return logger

    log_level = getattr(logging, level.upper(), logging.INFO)
    logger.setLevel(log_level)

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setLevel(log_level)
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=LOG_DATE_FORMAT))
    logger.addHandler(console_handler)

    # module loggers carry their own handler, don't echo through the root logger too
    logger.propagate = False

    return logger


def set_log_level(level: str):
    """Change the level of every logger this package has handed out"""
    log_level = getattr(logging, level.upper(), logging.INFO)
    for name, candidate in logging.Logger.manager.loggerDict.items():
        if not name.startswith(PACKAGE_LOGGER) or not isinstance(candidate, logging.Logger):
            continue
        candidate.setLevel(log_level)
        for handler in candidate.handlers:
            handler.setLevel(log_level)
