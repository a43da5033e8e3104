"""
Logging configuration for db-priors.

Provides centralized logging setup and utilities. Only the package logger
``db_priors`` carries handlers; module loggers live under it and propagate.
Log records go to stderr through rich so that CSV and JSON results on
stdout stay machine-readable.
"""

import logging
import os
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Optional

from rich.console import Console
from rich.logging import RichHandler

# Constants
DEFAULT_LOG_LEVEL = "INFO"
DEFAULT_LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
MAX_LOG_SIZE = 10 * 1024 * 1024  # 10MB
BACKUP_COUNT = 5
ROOT_LOGGER = "db_priors"

console = Console(stderr=True)


def package_logger_name(name: str) -> str:
    """Map a module name such as ``src.bayes.marginal`` under ``db_priors``."""
    if name == ROOT_LOGGER or name.startswith(ROOT_LOGGER + "."):
        return name
    head, _, rest = name.partition(".")
    if head == "src":
        return f"{ROOT_LOGGER}.{rest}" if rest else ROOT_LOGGER
    return f"{ROOT_LOGGER}.{name}"


class DBPriorsLogger:
    """Custom logger with rich output and file logging.

    Handlers are attached only when ``configure`` is set, which
    :func:`setup_logger` does for the package logger.
    """

    def __init__(
        self,
        name: str,
        level: Optional[str] = None,
        log_file: Optional[str] = None,
        format: str = DEFAULT_LOG_FORMAT,
        configure: bool = False,
    ) -> None:
        """Initialize logger.

        Args:
            name: Logger name; placed under ``db_priors``.
            level: Log level; module loggers inherit the package level when omitted.
            log_file: Optional log file path, used with ``configure``.
            format: Log format string of the file handler.
            configure: Attach the console and file handlers.
        """
        self.logger = logging.getLogger(package_logger_name(name))
        if level is not None:
            self.logger.setLevel(level.upper())
        if not configure:
            return

        for handler in self.logger.handlers[:]:
            self.logger.removeHandler(handler)
            handler.close()
        self.logger.propagate = False

        rich_handler = RichHandler(
            console=console, show_path=False, enable_link_path=True
        )
        rich_handler.setFormatter(logging.Formatter("%(message)s"))
        self.logger.addHandler(rich_handler)

        if log_file:
            log_path = Path(log_file)
            log_path.parent.mkdir(parents=True, exist_ok=True)

            file_handler = RotatingFileHandler(
                log_path, maxBytes=MAX_LOG_SIZE, backupCount=BACKUP_COUNT
            )
            file_handler.setFormatter(logging.Formatter(format))
            self.logger.addHandler(file_handler)

    @property
    def name(self) -> str:
        return self.logger.name

    def set_level(self, level: str) -> None:
        self.logger.setLevel(level.upper())

    def debug(self, msg: str, *args: Any, **kwargs: Any) -> None:
        self.logger.debug(msg, *args, **kwargs)

    def info(self, msg: str, *args: Any, **kwargs: Any) -> None:
        self.logger.info(msg, *args, **kwargs)

    def warning(self, msg: str, *args: Any, **kwargs: Any) -> None:
        self.logger.warning(msg, *args, **kwargs)

    def error(self, msg: str, *args: Any, **kwargs: Any) -> None:
        self.logger.error(msg, *args, **kwargs)

    def critical(self, msg: str, *args: Any, **kwargs: Any) -> None:
        self.logger.critical(msg, *args, **kwargs)

    def exception(self, msg: str, *args: Any, exc_info: bool = True, **kwargs: Any) -> None:
        """Log exception with traceback.

        Args:
            msg: Message to log.
            *args: Additional positional arguments.
            exc_info: Whether to include exception info.
            **kwargs: Additional keyword arguments.
        """
        self.logger.exception(msg, *args, exc_info=exc_info, **kwargs)


class TableLogger(DBPriorsLogger):
    """Logger for reproduction targets and simulations."""

    def __init__(self, target: str, **kwargs: Any) -> None:
        """Initialize table logger.

        Args:
            target: Reproduction target name (e.g. ``table1``).
            **kwargs: Additional logger arguments.
        """
        super().__init__(f"db_priors.tables.{target}", **kwargs)
        self.target = target

    def start_target(self, cells: int) -> None:
        self.info(f"Computing {self.target} ({cells} cells)")

    def log_cell(self, label: str, value: float, method: str) -> None:
        """Log one computed cell.

        Args:
            label: Human-readable cell coordinates.
            value: Computed Bayes factor or limit.
            method: Evaluation method tag.
        """
        self.debug(f"{self.target} [{label}] = {value:.6g} ({method})")

    def end_target(self, rows: int, duration: float) -> None:
        self.info(f"{self.target} done: {rows} rows in {duration:.2f}s")


def setup_logger(level: Optional[str] = None, log_file: Optional[str] = None) -> DBPriorsLogger:
    """Set up the package logger.

    Args:
        level: Optional log level override.
        log_file: Optional log file path.

    Returns:
        Configured logger.
    """
    log_level = (level or os.getenv("LOG_LEVEL", DEFAULT_LOG_LEVEL)).upper()
    log_file = log_file or os.getenv("LOG_FILE")

    logger = DBPriorsLogger(ROOT_LOGGER, level=log_level, log_file=log_file, configure=True)

    logger.debug(f"Log level: {log_level}")
    if log_file:
        logger.debug(f"Logging to file: {log_file}")

    return logger


def get_logger(name: str) -> DBPriorsLogger:
    """Get logger for module.

    Args:
        name: Module name, such as ``__name__``.

    Returns:
        Logger under ``db_priors`` without handlers of its own.
    """
    return DBPriorsLogger(name)


def set_global_level(level: str) -> None:
    """Apply ``level`` to the package logger; module loggers inherit it."""
    logging.getLogger(ROOT_LOGGER).setLevel(level.upper())


# Configure logging on import
logger = setup_logger()
