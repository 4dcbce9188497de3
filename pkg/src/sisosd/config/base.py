"""
Layered configuration: defaults, a TOML/JSON file, env vars and CLI args.

Each layer yields a nested dict; the handler overlays them in order, so a
later layer wins key by key.
"""

# Standard library imports
import abc
import copy
import json
import logging
import os
from pathlib import Path

# Third party imports
import toml

# Local imports
import sisosd.utils.misc


LEVEL_NAME_DEFAULTS = "defaults"
LEVEL_NAME_FILE = "local"
LEVEL_NAME_ENV_VARS = "env_vars"
LEVEL_NAME_CLI_ARGS = "cli_args"

EXTENSION_TOML = "toml"
EXTENSION_JSON = "json"
EXTENSION_DEFAULT = EXTENSION_TOML

VERSION_KEY = "config_version"

# Extension -> (loads, dumps)
CONFIG_CODECS = {
    EXTENSION_TOML: (toml.loads, toml.dumps),
    EXTENSION_JSON: (
        json.loads,
        lambda data: json.dumps(data, allow_nan=False, indent=4)),
    }


# --- Config files --- #

def _extension_of(path, extension=None):
    extension = extension or Path(path).suffix.lstrip(".")
    if extension not in CONFIG_CODECS:
        raise ValueError(
            f"Config files must be one of {list(CONFIG_CODECS)}, "
            f"not {extension!r}")
    return extension


def read_config_file(path, extension=None, logger=None):
    """Load a config file; with a logger, a malformed file exits with 1."""
    path = Path(path)
    loads, __ = CONFIG_CODECS[_extension_of(path, extension)]
    text = path.read_text(encoding="utf-8")
    try:
        return loads(text)
    except (toml.TomlDecodeError, json.JSONDecodeError) as e:
        if logger is None:
            raise
        logger.error("%s reading config file %r: %s",
                     type(e).__name__, path.as_posix(), e)
        logger.info("Error details:", exc_info=True)
        raise SystemExit(1) from e


def write_config_file(config_data, path, extension=None):
    path = Path(path)
    __, dumps = CONFIG_CODECS[_extension_of(path, extension)]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(config_data), encoding="utf-8", newline="\n")
    return path


# --- Config type and levels --- #

class ConfigType(sisosd.utils.misc.AutoReprMixin):
    """What a family of config layers describes and where its file lives."""

    def __init__(self, name, defaults=None, local_config_path=None,
                 path_variables=(), config_version=None):
        self.name = name
        self.defaults = {} if defaults is None else defaults
        self.local_config_path = (
            None if local_config_path is None else Path(local_config_path))
        self.path_variables = list(path_variables)
        self.config_version = config_version

    def convert_paths(self, config_data):
        for keys in self.path_variables:
            section = config_data
            for key in keys[:-1]:
                section = section.get(key, None)
                if not isinstance(section, dict):
                    break
            else:
                if section.get(keys[-1], None):
                    section[keys[-1]] = sisosd.utils.misc.convert_path(
                        section[keys[-1]])
        return config_data


class ConfigLevel(sisosd.utils.misc.AutoReprMixin, metaclass=abc.ABCMeta):
    def __init__(self, name, config_type, logger=None):
        self.name = name
        self.config_type = config_type
        self.logger = logger

    @abc.abstractmethod
    def read_config(self, input_data=None):
        """Return this layer's nested dict, paths converted."""


class DefaultsConfigLevel(ConfigLevel):
    def __init__(self, config_type, name=LEVEL_NAME_DEFAULTS, **kwargs):
        super().__init__(name=name, config_type=config_type, **kwargs)

    def read_config(self, input_data=None):
        config_data = copy.deepcopy(
            self.config_type.defaults if input_data is None else input_data)
        return self.config_type.convert_paths(config_data)


class FileConfigLevel(ConfigLevel):
    """A config file; a directory path gets ``<type name>.toml`` appended."""

    def __init__(self, config_type, path=None, name=LEVEL_NAME_FILE,
                 **kwargs):
        super().__init__(name=name, config_type=config_type, **kwargs)
        path = Path(config_type.local_config_path if path is None else path)
        if path.suffix.lstrip(".") not in CONFIG_CODECS:
            path = path / f"{config_type.name}.{EXTENSION_DEFAULT}"
        self.path = path

    def read_config(self, input_data=None):
        if input_data is not None:
            config_data = copy.deepcopy(input_data)
        elif not self.path.exists():
            config_data = {}
        else:
            config_data = read_config_file(self.path, logger=self.logger)

        file_version = config_data.pop(VERSION_KEY, None)
        expected_version = self.config_type.config_version
        if (file_version is not None and expected_version is not None
                and file_version > expected_version):
            logging.getLogger(__name__).warning(
                "Config file %r has version %s, newer than %s; "
                "unknown keys are ignored", self.path.as_posix(),
                file_version, expected_version)
        return self.config_type.convert_paths(config_data)

    def write_config(self, config_data):
        if self.config_type.config_version is not None:
            config_data = {VERSION_KEY: self.config_type.config_version,
                           **config_data}
        return write_config_file(config_data, self.path)


class MappingConfigLevel(ConfigLevel):
    """Flat ``source key -> (section, ..., key)`` lookups into a nested dict.

    Missing and ``None`` source values leave the key unset.
    """

    def __init__(self, name, config_type, mapping=None, **kwargs):
        super().__init__(name=name, config_type=config_type, **kwargs)
        self.mapping = {} if mapping is None else mapping

    def read_config(self, input_data=None):
        input_data = {} if input_data is None else input_data
        config_data = {}
        for source_key, config_keys in self.mapping.items():
            value = input_data.get(source_key, None)
            if value is not None:
                sisosd.utils.misc.set_nested(config_data, config_keys, value)
        return self.config_type.convert_paths(config_data)


class EnvVarsConfigLevel(MappingConfigLevel):
    def __init__(self, config_type, mapping=None, name=LEVEL_NAME_ENV_VARS,
                 **kwargs):
        super().__init__(name=name, config_type=config_type,
                         mapping=mapping, **kwargs)

    def read_config(self, input_data=None):
        return super().read_config(
            os.environ if input_data is None else input_data)


class CLIArgsConfigLevel(MappingConfigLevel):
    def __init__(self, config_type, mapping=None, name=LEVEL_NAME_CLI_ARGS,
                 **kwargs):
        super().__init__(name=name, config_type=config_type,
                         mapping=mapping, **kwargs)

    def read_config(self, input_data=None):
        if input_data is not None and not isinstance(input_data, dict):
            input_data = vars(input_data)
        return super().read_config(input_data)


# --- Config handler --- #

class ConfigHandler(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, config_type, config_levels=()):
        self.config_type = config_type
        config_levels = list(config_levels)
        if not any(isinstance(level, DefaultsConfigLevel)
                   for level in config_levels):
            config_levels.insert(0, DefaultsConfigLevel(config_type))
        self.config_levels = {level.name: level for level in config_levels}

    def read_configs(self, input_data=None):
        """Read every level; ``input_data`` overrides a level's own source."""
        input_data = {} if input_data is None else input_data
        return {name: level.read_config(input_data.get(name, None))
                for name, level in self.config_levels.items()}

    def render_config(self, configs=None):
        if configs is None:
            configs = self.read_configs()
        rendered = {}
        for config_data in configs.values():
            sisosd.utils.misc.merge_nested(
                rendered, copy.deepcopy(config_data))
        return rendered
