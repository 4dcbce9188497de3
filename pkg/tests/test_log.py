"""
Tests for console verbosity and file log config rendering.
"""

# Standard library imports
import logging

# Third party imports
import pytest

# Local imports
from sisosd.config.confighandlers import DEFAULT_CONFIG_LOG
import sisosd.utils.log


@pytest.mark.parametrize(
    "verbose, expected",
    [(0, logging.WARNING), (1, logging.INFO), (2, logging.DEBUG),
     (-1, logging.ERROR), (-2, logging.CRITICAL), (9, 2), (-9, 99)])
def test_determine_log_level(verbose, expected):
    assert sisosd.utils.log.determine_log_level(verbose) == expected


def test_without_log_file():
    log_config = sisosd.utils.log.render_full_log_config(
        DEFAULT_CONFIG_LOG, log_level_file=logging.DEBUG,
        log_level_console=logging.ERROR)
    assert "file" not in log_config["handlers"]
    assert log_config["root"]["handlers"] == ["console"]
    assert log_config["handlers"]["console"]["level"] == logging.ERROR
    assert log_config["root"]["level"] == logging.INFO
    assert "file" in DEFAULT_CONFIG_LOG["handlers"]


def test_with_log_file(tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    log_config = sisosd.utils.log.render_full_log_config(
        DEFAULT_CONFIG_LOG, log_file=log_file,
        log_level_file=logging.DEBUG, log_level_console="warning")
    assert log_file.parent.is_dir()
    assert log_config["handlers"]["file"]["filename"] == log_file.as_posix()
    assert log_config["handlers"]["console"]["level"] == logging.WARNING
    assert log_config["root"]["level"] == logging.DEBUG


def test_basic_logging_consumes_verbosity():
    @sisosd.utils.log.basic_logging
    def command(value):
        return value * 2

    assert command(4, verbose=1, quiet=0) == 8
