"""Unit tests for logging setup."""

import logging

from rich.logging import RichHandler

from freqalloc_core.config import freqalloc_settings
from freqalloc_core.logging import DEFAULT_FORMAT, get_logger, setup_logging


def test_get_logger_is_named():
    logger = get_logger("freqalloc_core.optim.aquila")
    assert isinstance(logger, logging.Logger)
    assert logger.name == "freqalloc_core.optim.aquila"


def test_plain_handler_uses_default_format():
    setup_logging(level="DEBUG")
    root = logging.getLogger()
    assert root.level == logging.DEBUG
    assert len(root.handlers) == 1
    assert root.handlers[0].formatter._fmt == DEFAULT_FORMAT


def test_unknown_level_falls_back_to_info():
    setup_logging(level="chatty")
    assert logging.getLogger().level == logging.INFO


def test_level_is_case_insensitive():
    setup_logging(level="warning")
    assert logging.getLogger().level == logging.WARNING


def test_records_go_to_stderr(capsys):
    setup_logging(level="INFO", fmt="%(levelname)s %(message)s")
    get_logger("freqalloc_core.experiments.runner").info("seed %d done", 3)
    captured = capsys.readouterr()
    assert "INFO seed 3 done" in captured.err
    assert captured.out == ""


def test_rich_replaces_plain_handler():
    setup_logging(level="INFO")
    setup_logging(level="INFO", rich=True)
    handlers = logging.getLogger().handlers
    assert len(handlers) == 1
    assert isinstance(handlers[0], RichHandler)
    setup_logging(level="INFO")
    assert not any(isinstance(h, RichHandler) for h in logging.getLogger().handlers)


def test_settings_format_matches_default():
    assert freqalloc_settings.LOG_FORMAT == DEFAULT_FORMAT
