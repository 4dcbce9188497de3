"""
General shared constants for sisosd.
"""

# Standard library imports
import enum
import os
from pathlib import Path


# --- General global constants ---

# Package name
PACKAGE_NAME = "sisosd"


# --- Config constants ---

# Config type names
CONFIG_NAME_LOG = "log"
CONFIG_NAME_SIM = "sim"

# Config variables
CONFIG_PATH_XDG = Path(
    f"~{os.environ.get('SUDO_USER', '')}/.config").expanduser()
CONFIG_PATH_LOCAL = CONFIG_PATH_XDG / PACKAGE_NAME
CONFIG_VERSION = 1
ENV_VAR_PREFIX = PACKAGE_NAME.upper() + "_"


# --- Numerical constants ---

# Pivot tolerance for the QR factorizations
QR_PIVOT_TOLERANCE = 1e-12

# Largest Q * M_T the exhaustive oracle accepts
ORACLE_MAX_BITS = 20

# Stand-in for an infinite LLR on known (padding) bits
PAD_LLR = 1e6

# Convolutional code of the outer BICM chain
CODE_CONSTRAINT_LENGTH = 7
CODE_GENERATORS_OCTAL = (0o133, 0o171)
CODE_RATE = 0.5

# Saturation of decoder LLRs on branches the trellis can never take
LLR_LIMIT = 1e6

# S-random interleaver generation
INTERLEAVER_SPREAD_DEFAULT = 16
INTERLEAVER_MAX_ATTEMPTS = 200


# --- Output constants ---

CSV_SCHEMA_VERSION = 1
GOLDEN_FORMAT_NAME = "sisosd-golden"
GOLDEN_SEEDS = tuple(range(12))
OUT_PATH_DEFAULT = "sisosd_results.csv"


# --- Exit codes ---

class ExitCode(enum.IntEnum):
    OK = 0
    USAGE = 1
    RUNTIME = 2
    GOLDEN_MISMATCH = 3


# --- Sentinels and enums ---

class EnumMode(enum.Enum):
    HYBRID = "hybrid"
    FULL_SORT_SE = "se-sort"
    CHANNEL_ONLY = "channel-only"


class QrdMode(enum.Enum):
    QRD = "qrd"
    SQRD = "sqrd"


class ClipMode(enum.Enum):
    STRICT = "strict"
    UPPER = "upper"


MODULATIONS = {
    "qpsk": 2,
    "16qam": 4,
    "64qam": 6,
    }
