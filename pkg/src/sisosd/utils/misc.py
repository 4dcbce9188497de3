"""
Small shared helpers: list arguments, nested dicts, paths and versions.
"""

# Standard library imports
import collections.abc
import os
from pathlib import Path

# Third party imports
import packaging.version

# Local imports
import sisosd


# --- Argument helpers --- #

def split_list_arg(value, convert=float):
    """Turn "8, 9,10", a sequence or a scalar into a list of ``convert``."""
    if isinstance(value, str):
        return [convert(item.strip()) for item in value.split(",")
                if item.strip()]
    if isinstance(value, collections.abc.Iterable):
        return [convert(item) for item in value]
    return [convert(value)]


# --- Nested config dicts --- #

def merge_nested(base, update):
    """Overlay ``update`` onto ``base`` section by section, in place."""
    for key, value in update.items():
        if (isinstance(value, collections.abc.Mapping)
                and isinstance(base.get(key, None), collections.abc.Mapping)):
            merge_nested(base[key], value)
        else:
            base[key] = value
    return base


def set_nested(data, keys, value):
    section = data
    for key in keys[:-1]:
        section = section.setdefault(key, {})
    section[keys[-1]] = value
    return data


def convert_path(path):
    """Expand ``~`` (to the invoking user's home under sudo) into a Path."""
    sudo_user = os.getenv("SUDO_USER", "")
    return Path(str(path).replace("~", "~" + sudo_user)).expanduser()


# --- Versions --- #

def check_version_compatible(version_written, logger=None):
    """Whether data written by ``version_written`` is readable here.

    Only the major.minor release is compared; newer files are refused.
    """
    written = packaging.version.parse(str(version_written))
    current = packaging.version.parse(sisosd.__version__)
    if written.release[:2] <= current.release[:2]:
        return True
    if logger is not None:
        logger("Data written by sisosd version %s, newer than %s",
               written, current)
    return False


class AutoReprMixin:
    def __repr__(self):
        fields = ", ".join(
            f"{key}={value!r}" for key, value in self.__dict__.items())
        return f"{type(self).__name__}({fields})"
