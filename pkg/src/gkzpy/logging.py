import logging
import sys
import time
from contextlib import contextmanager
from functools import lru_cache
from typing import Any, Iterator, Optional

import mpmath
import sympy

LOG_FORMAT = "[%(asctime)s] [%(levelname)s] [%(name)s] - %(message)s"


def format_context_value(value: Any) -> str:
    """Render a context value for a log line.

    Exact scalars print as ``p/q``, index sets print sorted and high-precision numbers are
    shortened to 12 significant digits.
    """
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(value, 12)
    if isinstance(value, sympy.Basic):
        return str(value)
    if isinstance(value, (set, frozenset)):
        return "{" + ", ".join(format_context_value(v) for v in sorted(value, key=str)) + "}"
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(format_context_value(v) for v in value) + ")"
    return str(value)


class Logger:
    """Base logger class for gkzpy.

    Wraps a standard library logger with a fixed format and key=value context rendering
    suited to exact and high-precision values.
    """

    # Log levels
    DEBUG = logging.DEBUG
    INFO = logging.INFO
    WARNING = logging.WARNING
    ERROR = logging.ERROR
    CRITICAL = logging.CRITICAL

    def __init__(
        self,
        name: str = "gkzpy",
        level: int = logging.INFO,
        format_string: Optional[str] = None,
        log_to_console: bool = True,
        log_file: Optional[str] = None,
    ):
        """Initialize the logger.

        Args:
            name: Logger name
            level: Minimum logging level
            format_string: Custom format string for log messages
            log_to_console: Whether to log to stderr
            log_file: Optional file path to log to
        """
        self.name = name
        self.level = level
        self.format_string = format_string or LOG_FORMAT
        self.log_to_console = log_to_console
        self.log_file = log_file

        self.logger = logging.getLogger(name)
        self.logger.setLevel(level)
        self.logger.propagate = False

        if self.logger.handlers:
            self.logger.handlers.clear()

        formatter = logging.Formatter(self.format_string)

        # stdout is reserved for CLI payloads
        if log_to_console:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setFormatter(formatter)
            self.logger.addHandler(console_handler)

        if log_file:
            file_handler = logging.FileHandler(log_file)
            file_handler.setFormatter(formatter)
            self.logger.addHandler(file_handler)

    def child(self, suffix: str) -> "Logger":
        """Return a logger named ``<name>.<suffix>`` with the same configuration."""
        return Logger(
            name=f"{self.name}.{suffix}",
            level=self.level,
            format_string=self.format_string,
            log_to_console=self.log_to_console,
            log_file=self.log_file,
        )

    def debug(self, message: str, **kwargs: Any) -> None:
        """Log a debug message.

        Args:
            message: The message to log
            **kwargs: Additional context to include in the log
        """
        self._log(self.DEBUG, message, **kwargs)

    def info(self, message: str, **kwargs: Any) -> None:
        """Log an info message."""
        self._log(self.INFO, message, **kwargs)

    def warning(self, message: str, **kwargs: Any) -> None:
        """Log a warning message."""
        self._log(self.WARNING, message, **kwargs)

    def error(self, message: str, **kwargs: Any) -> None:
        """Log an error message."""
        self._log(self.ERROR, message, **kwargs)

    def critical(self, message: str, **kwargs: Any) -> None:
        """Log a critical message."""
        self._log(self.CRITICAL, message, **kwargs)

    @contextmanager
    def timed(self, operation: str, **kwargs: Any) -> Iterator[None]:
        """Log the wall time spent inside the block at DEBUG level.

        Args:
            operation: Name of the timed operation
            **kwargs: Additional context to include in the log
        """
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            self._log(self.DEBUG, f"{operation} finished", seconds=f"{elapsed:.4f}", **kwargs)

    def _log(self, level: int, message: str, **kwargs: Any) -> None:
        """Internal method to handle logging with context.

        Args:
            level: Log level
            message: The message to log
            **kwargs: Additional context to include in the log
        """
        if kwargs:
            context_str = " ".join(f"{k}={format_context_value(v)}" for k, v in kwargs.items())
            message = f"{message} - {context_str}"
        self.logger.log(level, message)


class DefaultLogger(Logger):
    """Default logger implementation for gkzpy.

    The level follows ``GKZ_LOG_LEVEL`` unless given explicitly.
    """

    def __init__(
        self,
        name: str = "gkzpy",
        level: Optional[int] = None,
        log_file: Optional[str] = None,
    ):
        """Initialize the default logger.

        Args:
            name: Logger name
            level: Minimum logging level, defaults to the configured level
            log_file: Optional file path to log to
        """
        if level is None:
            from .settings import get_settings

            level = logging.getLevelName(get_settings().log_level.upper())
            if not isinstance(level, int):
                level = logging.INFO
        super().__init__(
            name=name,
            level=level,
            format_string=LOG_FORMAT,
            log_to_console=True,
            log_file=log_file,
        )


@lru_cache(maxsize=None)
def get_default_logger(name: str = "gkzpy") -> DefaultLogger:
    """Return the shared default logger for ``name``, creating it on first use."""
    return DefaultLogger(name=name)
