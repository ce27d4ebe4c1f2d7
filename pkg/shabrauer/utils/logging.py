# shabrauer/utils/logging.py

import logging
import sys
from logging.handlers import RotatingFileHandler
from typing import Optional, Union

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logger(
    name: str,
    log_file: Optional[str] = None,
    level: Union[int, str] = logging.INFO,
) -> logging.Logger:
    """
    Sets up a logger with a console handler and, optionally, a rotating file handler.

    Args:
        name (str): Name of the logger.
        log_file (Optional[str]): Path to the log file; console only when None.
        level (Union[int, str]): Logging level (e.g., logging.INFO or "DEBUG").

    Returns:
        logging.Logger: Configured logger.
    """
    logger = logging.getLogger(name)
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            raise ValueError(f"Unknown log level: {level}")
    logger.setLevel(level)

    formatter = logging.Formatter(LOG_FORMAT)

    # Avoid duplicate handlers
    if not any(getattr(h, "_shabrauer_console", False) for h in logger.handlers):
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        console_handler._shabrauer_console = True
        logger.addHandler(console_handler)

    if log_file and not any(
        isinstance(h, RotatingFileHandler) and h.baseFilename.endswith(log_file) for h in logger.handlers
    ):
        file_handler = RotatingFileHandler(log_file, maxBytes=5_000_000, backupCount=3)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger
