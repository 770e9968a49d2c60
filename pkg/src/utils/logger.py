"""Logging configuration for lpdecode."""
import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from typing import Optional

try:
    import colorlog
    HAS_COLORLOG = True
except ImportError:
    HAS_COLORLOG = False

LOG_FORMAT = '%(asctime)s - %(name)s - [%(command)s] %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


class CommandFilter(logging.Filter):
    """Tags every record with the subcommand being run ("-" outside a command)."""

    def __init__(self, command: str = "-"):
        super().__init__()
        self.command = command

    def filter(self, record: logging.LogRecord) -> bool:
        record.command = self.command
        return True


def setup_logger(
    name: str = "src",
    level: str = "INFO",
    log_file: Optional[str] = None,
    console_colors: bool = True,
    command: Optional[str] = None
) -> logging.Logger:
    """
    Set up the package logger with a console handler and an optional rotating file handler.

    Modules log through logging.getLogger(__name__), so configuring the
    package logger covers all of them. Console output goes to stderr;
    stdout is reserved for results. The command tag is added by a filter
    on each handler, so records from module loggers carry it too.

    Args:
        name: Logger name
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Path to log file (optional)
        console_colors: Whether to use colored output in console
        command: Subcommand to tag records with; on an already configured
            logger it replaces the current tag

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, level.upper()))

    # Prevent duplicate handlers if logger already exists
    if logger.handlers:
        if command is not None:
            for handler in logger.handlers:
                for f in handler.filters:
                    if isinstance(f, CommandFilter):
                        f.command = command
        return logger

    command_filter = CommandFilter(command or "-")

    if HAS_COLORLOG and console_colors:
        console_handler = colorlog.StreamHandler(sys.stderr)
        console_handler.setFormatter(colorlog.ColoredFormatter(
            '%(log_color)s' + LOG_FORMAT,
            datefmt=DATE_FORMAT,
            log_colors={
                'DEBUG': 'cyan',
                'INFO': 'green',
                'WARNING': 'yellow',
                'ERROR': 'red',
                'CRITICAL': 'red,bg_white',
            }
        ))
    else:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))

    console_handler.addFilter(command_filter)
    logger.addHandler(console_handler)

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir, exist_ok=True)

        file_handler = RotatingFileHandler(
            log_file,
            maxBytes=10 * 1024 * 1024,  # 10MB
            backupCount=5
        )
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
        file_handler.addFilter(command_filter)
        logger.addHandler(file_handler)

    return logger
