import logging
from unittest.mock import patch

import mpmath
import sympy

from src.gkzpy.logging import DefaultLogger, Logger, format_context_value, get_default_logger


class TestLogger:
    """Test the Logger class."""

    def test_logger_initialization(self):
        """Test that the logger initializes correctly."""
        logger = Logger(name="test-logger")
        assert logger.logger.name == "test-logger"
        assert logger.logger.level == logging.INFO
        assert len(logger.logger.handlers) > 0

    def test_logger_levels(self):
        """Test that the logger supports different log levels."""
        logger = Logger(name="test-logger", level=logging.DEBUG)
        assert logger.logger.level == logging.DEBUG

        logger = Logger(name="test-logger", level=logging.WARNING)
        assert logger.logger.level == logging.WARNING

    def test_log_methods(self):
        """Test that the log methods work correctly."""
        logger = Logger(name="test-logger")

        with patch.object(logger.logger, "log") as mock_log:
            logger.debug("Debug message")
            mock_log.assert_called_with(logging.DEBUG, "Debug message")

            logger.info("Info message")
            mock_log.assert_called_with(logging.INFO, "Info message")

            logger.warning("Warning message")
            mock_log.assert_called_with(logging.WARNING, "Warning message")

            logger.error("Error message")
            mock_log.assert_called_with(logging.ERROR, "Error message")

            logger.critical("Critical message")
            mock_log.assert_called_with(logging.CRITICAL, "Critical message")

    def test_log_with_context(self):
        """Test logging with exact and numeric context values."""
        logger = Logger(name="test-logger")

        with patch.object(logger.logger, "log") as mock_log:
            logger.info("Computed slopes", locus="T", slopes=[sympy.Rational(4, 3), 5])
            mock_log.assert_called_with(logging.INFO, "Computed slopes - locus=T slopes=(4/3, 5)")

    def test_child_logger(self):
        logger = Logger(name="gkzpy", level=logging.DEBUG)
        child = logger.child("series")
        assert child.name == "gkzpy.series"
        assert child.logger.level == logging.DEBUG

    def test_timed_logs_elapsed_time(self):
        logger = Logger(name="test-logger", level=logging.DEBUG)

        with patch.object(logger.logger, "log") as mock_log:
            with logger.timed("Laplace sum", mode="ode"):
                pass
            level, message = mock_log.call_args[0]
            assert level == logging.DEBUG
            assert message.startswith("Laplace sum finished - seconds=")
            assert message.endswith("mode=ode")

    def test_console_output_goes_to_stderr(self, capsys):
        logger = Logger(name="stderr-logger")
        logger.info("Hello")
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "Hello" in captured.err


class TestFormatContextValue:
    """Tests for the rendering of context values."""

    def test_rationals(self):
        assert format_context_value(sympy.Rational(-4, 15)) == "-4/15"

    def test_sets_are_sorted(self):
        assert format_context_value({3, 1, 2}) == "{1, 2, 3}"

    def test_nested_tuples(self):
        assert format_context_value(((0, 1), (2,))) == "((0, 1), (2))"

    def test_high_precision_numbers_are_shortened(self):
        with mpmath.workprec(256):
            assert format_context_value(mpmath.mpf(1) / 3) == "0.333333333333"


class TestDefaultLogger:
    """Test the DefaultLogger class."""

    def test_default_logger_initialization(self):
        """Test that the default logger initializes with correct defaults."""
        logger = DefaultLogger(level=logging.INFO)
        assert logger.logger.name == "gkzpy"
        assert logger.logger.level == logging.INFO
        assert len(logger.logger.handlers) > 0

    def test_level_from_settings(self, monkeypatch):
        from src.gkzpy import settings

        monkeypatch.setenv("GKZ_LOG_LEVEL", "warning")
        settings.get_settings.cache_clear()
        try:
            logger = DefaultLogger(name="gkzpy.level-test")
            assert logger.logger.level == logging.WARNING
        finally:
            settings.get_settings.cache_clear()

    def test_default_logger_output(self, capsys):
        """Test that the default logger outputs correctly formatted messages."""
        logger = DefaultLogger(level=logging.DEBUG)
        logger.debug("Test debug message")
        logger.info("Test info message")

        output = capsys.readouterr().err
        assert "[DEBUG]" in output
        assert "[INFO]" in output
        assert "[gkzpy]" in output
        assert "Test debug message" in output
        assert "Test info message" in output

    def test_get_default_logger_is_shared(self):
        assert get_default_logger("gkzpy.shared") is get_default_logger("gkzpy.shared")
