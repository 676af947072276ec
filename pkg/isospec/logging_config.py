import logging
import os
import sys
from logging.handlers import RotatingFileHandler

from isospec.config import settings

# Set up logging format
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
DEBUG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(pathname)s:%(lineno)d - %(message)s"

MAX_BYTES = 10485760  # 10MB
BACKUP_COUNT = 5


def configure_logging(debug_mode=False, log_dir=None):
    """
    Configure logging for the application.

    Console output goes to stderr; stdout is reserved for emitted tables.

    Args:
        debug_mode: If True, log at DEBUG level with source locations
        log_dir: Directory for the rotating log files (defaults to settings.log_dir)
    """
    log_level = logging.DEBUG if debug_mode else logging.INFO
    log_dir = log_dir or settings.log_dir
    os.makedirs(log_dir, exist_ok=True)

    # Create formatters
    console_formatter = logging.Formatter(DEBUG_FORMAT if debug_mode else LOG_FORMAT, DATE_FORMAT)
    file_formatter = logging.Formatter(DEBUG_FORMAT, DATE_FORMAT)

    # Create handlers
    console_handler = logging.StreamHandler(sys.stderr)
    file_handler = RotatingFileHandler(
        os.path.join(log_dir, "isospec.log"),
        maxBytes=MAX_BYTES,
        backupCount=BACKUP_COUNT,
    )

    console_handler.setLevel(log_level)
    file_handler.setLevel(logging.DEBUG)
    console_handler.setFormatter(console_formatter)
    file_handler.setFormatter(file_formatter)

    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)

    # Remove any existing handlers to avoid duplicate logs
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    root_logger.addHandler(console_handler)
    root_logger.addHandler(file_handler)

    # Create a separate error log file
    error_handler = RotatingFileHandler(
        os.path.join(log_dir, "error.log"),
        maxBytes=MAX_BYTES,
        backupCount=BACKUP_COUNT,
    )
    error_handler.setLevel(logging.ERROR)
    error_handler.setFormatter(file_formatter)
    root_logger.addHandler(error_handler)

    # Third-party loggers stay quiet unless debugging
    logging.getLogger("scipy").setLevel(logging.DEBUG if debug_mode else logging.WARNING)

    logging.info("Logging configured with debug_mode=%s", debug_mode)
