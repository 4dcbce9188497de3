"""
Console and file logging setup for the sisosd commands.
"""

# Standard library imports
import copy
import functools
import logging
import logging.config
import sys

# Local imports
from sisosd.constants import PACKAGE_NAME
import sisosd.utils.misc


# Net verbosity (-v count minus -q count) -> level; clamped to the ends
VERBOSITY_LEVELS = (
    99,
    logging.CRITICAL,
    logging.ERROR,
    logging.WARNING,
    logging.INFO,
    logging.DEBUG,
    2,
    )
VERBOSITY_OFFSET = 3

LOG_FORMAT_SCRIPT = "{message}"
LOG_FORMAT_DEBUG = "{levelname} | {name} | {message}"


def determine_log_level(verbose=0):
    index = round(verbose) + VERBOSITY_OFFSET
    return VERBOSITY_LEVELS[min(max(index, 0), len(VERBOSITY_LEVELS) - 1)]


def setup_basic_logging(verbose=0, quiet=0, script_mode=False):
    """Log to stdout at the level set by ``verbose`` and ``quiet`` counts.

    In script mode, plain messages are printed unless debugging; otherwise
    only the package logger's level is set.
    """
    log_level = determine_log_level((verbose or 0) - (quiet or 0))
    plain = script_mode and log_level >= logging.INFO
    logging.basicConfig(
        stream=sys.stdout,
        style="{",
        format=LOG_FORMAT_SCRIPT if plain else LOG_FORMAT_DEBUG,
        level=log_level if script_mode else logging.WARNING,
        )
    logger = logging.getLogger(PACKAGE_NAME)
    if not script_mode:
        logger.setLevel(log_level)
    return logger


def basic_logging(func):
    """Consume ``verbose``/``quiet`` kwargs and set up script logging."""
    @functools.wraps(func)
    def _with_basic_logging(*args, verbose=0, quiet=0, **kwargs):
        setup_basic_logging(verbose=verbose, quiet=quiet, script_mode=True)
        return func(*args, **kwargs)
    return _with_basic_logging


def _level_number(level):
    if isinstance(level, str):
        return logging.getLevelName(level.upper())
    return int(level)


def render_full_log_config(log_config, log_file=None,
                           log_level_file=None, log_level_console=None):
    log_config = copy.deepcopy(log_config)
    handlers = log_config["handlers"]
    root = log_config["root"]

    if log_file:
        log_path = sisosd.utils.misc.convert_path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers["file"]["filename"] = log_path.as_posix()
    else:
        handlers.pop("file", None)
        log_level_file = None
    root["handlers"] = [name for name in root.get("handlers", [])
                        if name in handlers]

    for name, level in (("file", log_level_file),
                        ("console", log_level_console)):
        if level is None or name not in handlers:
            continue
        handlers[name]["level"] = _level_number(level)
        if name not in root["handlers"]:
            root["handlers"].append(name)

    # The root must pass everything either handler wants
    root["level"] = min(
        _level_number(handler.get("level", root["level"]))
        for handler in [root] + [handlers[name] for name in root["handlers"]])
    return log_config


def setup_full_logging(log_config, **render_kwargs):
    log_config = render_full_log_config(log_config, **render_kwargs)
    logging.config.dictConfig(log_config)
    return log_config
