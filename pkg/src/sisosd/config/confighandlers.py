"""
Config handler setup for sisosd's managed configs.
"""

# Local imports
import sisosd.config.base
from sisosd.constants import (
    CONFIG_NAME_LOG,
    CONFIG_NAME_SIM,
    CONFIG_PATH_LOCAL,
    CONFIG_VERSION,
    ENV_VAR_PREFIX,
    OUT_PATH_DEFAULT,
    )


# --- Simulation config --- #

# Defaults follow the 4x4 16-QAM, SQRD, 512-information-bit reference setup
DEFAULT_CONFIG_SIM = {
    "system": {
        "mt": 4,
        "mr": 4,
        "modulation": "16qam",
        "mapping_file": "",
        },
    "detector": {
        "enum_mode": "hybrid",
        "clip_mode": "strict",
        "l_e_max": ["inf"],
        "qrd_mode": "sqrd",
        },
    "code": {
        "k_info": 512,
        "interleaver_spread": 16,
        },
    "sim": {
        "snr_db": [10.0],
        "iterations": 4,
        "frames": 100,
        "seed": 0,
        "max_frame_errors": 100,
        "target_fer": 0.01,
        "workers": 1,
        "f_clk": 250e6,
        "noiseless": False,
        },
    "output": {
        "out": OUT_PATH_DEFAULT,
        "log_file": "",
        },
    }

# Run subcommand argument name -> location in the sim config
SIM_ARG_MAPPING = {
    "mt": ("system", "mt"),
    "mr": ("system", "mr"),
    "mod": ("system", "modulation"),
    "mapping_file": ("system", "mapping_file"),
    "enum": ("detector", "enum_mode"),
    "clip_mode": ("detector", "clip_mode"),
    "lemax": ("detector", "l_e_max"),
    "qrd": ("detector", "qrd_mode"),
    "kinfo": ("code", "k_info"),
    "spread": ("code", "interleaver_spread"),
    "snr": ("sim", "snr_db"),
    "iters": ("sim", "iterations"),
    "frames": ("sim", "frames"),
    "seed": ("sim", "seed"),
    "max_errors": ("sim", "max_frame_errors"),
    "target_fer": ("sim", "target_fer"),
    "workers": ("sim", "workers"),
    "fclk": ("sim", "f_clk"),
    "noiseless": ("sim", "noiseless"),
    "out": ("output", "out"),
    "log_file": ("output", "log_file"),
    }

SIM_ENV_VAR_MAPPING = {
    ENV_VAR_PREFIX + arg_name.upper(): config_keys
    for arg_name, config_keys in SIM_ARG_MAPPING.items()}

SIM_PATH_VARIABLES = [
    ("system", "mapping_file"),
    ("output", "out"),
    ("output", "log_file"),
    ]


def create_sim_config_handler(config_path=None, logger=None):
    config_type = sisosd.config.base.ConfigType(
        name=CONFIG_NAME_SIM,
        defaults=DEFAULT_CONFIG_SIM,
        local_config_path=CONFIG_PATH_LOCAL,
        path_variables=SIM_PATH_VARIABLES,
        config_version=CONFIG_VERSION,
        )
    config_levels = [
        sisosd.config.base.FileConfigLevel(
            path=config_path, config_type=config_type, logger=logger),
        sisosd.config.base.EnvVarsConfigLevel(
            mapping=SIM_ENV_VAR_MAPPING, config_type=config_type),
        sisosd.config.base.CLIArgsConfigLevel(
            mapping=SIM_ARG_MAPPING, config_type=config_type),
        ]
    return sisosd.config.base.ConfigHandler(
        config_type=config_type, config_levels=config_levels)


# --- Log config --- #

LOG_FORMAT_DETAILED = ("{asctime}.{msecs:0>3.0f} | {levelname} | {processName}"
                       " | {name} | {message} (T+{relativeCreated:.0f} ms)")
DEFAULT_LOG_LEVEL = "INFO"

DEFAULT_CONFIG_LOG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "detailed": {
            "datefmt": "%Y-%m-%d %H:%M:%S",
            "format": LOG_FORMAT_DETAILED,
            "style": "{",
            },
        },
    "handlers": {
        "file": {
            "backupCount": 10,
            "class": "logging.handlers.RotatingFileHandler",
            "encoding": "utf-8",
            "filename": "sisosd.log",
            "formatter": "detailed",
            "level": DEFAULT_LOG_LEVEL,
            "maxBytes": int(1e7),
            },
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "detailed",
            "level": DEFAULT_LOG_LEVEL,
            "stream": "ext://sys.stdout",
            },
        },
    "root": {
        "handlers": ["file", "console"],
        "level": DEFAULT_LOG_LEVEL,
        },
    }


def create_log_config_handler():
    config_type = sisosd.config.base.ConfigType(
        name=CONFIG_NAME_LOG,
        defaults=DEFAULT_CONFIG_LOG,
        local_config_path=CONFIG_PATH_LOCAL,
        config_version=None,
        )
    return sisosd.config.base.ConfigHandler(
        config_type=config_type,
        config_levels=[sisosd.config.base.FileConfigLevel(
            config_type=config_type)],
        )


CONFIG_HANDLER_LOG = create_log_config_handler()
