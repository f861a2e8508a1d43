import logging
import os
from logging.handlers import RotatingFileHandler

from .settings import settings


def setup_logging(level: str | None = None) -> None:
    """
    Configure the root logger with a stderr StreamHandler and, when
    FUNTF_LOG_FILE is set, a RotatingFileHandler. Safe to call repeatedly.
    """
    root_logger = logging.getLogger()
    root_logger.setLevel((level or settings.log_level).upper())

    formatter = logging.Formatter(settings.log_format)

    # 1. Add StreamHandler if none exists
    has_stream = any(
        isinstance(h, logging.StreamHandler) and not isinstance(h, logging.FileHandler)
        for h in root_logger.handlers
    )
    if not has_stream:
        stream_handler = logging.StreamHandler()
        stream_handler.setFormatter(formatter)
        root_logger.addHandler(stream_handler)

    # 2. File handler only when configured (idempotent check)
    log_file = settings.log_file
    if log_file:
        directory = os.path.dirname(log_file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        has_file = any(
            isinstance(h, RotatingFileHandler)
            and h.baseFilename == os.path.abspath(log_file)
            for h in root_logger.handlers
        )
        if not has_file:
            file_handler = RotatingFileHandler(
                log_file, maxBytes=10 * 1024 * 1024, backupCount=5
            )
            file_handler.setFormatter(formatter)
            root_logger.addHandler(file_handler)
