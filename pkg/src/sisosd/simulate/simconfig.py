"""
Validated simulation configuration for the iterative receiver harness.
"""

# Standard library imports
import math

# Local imports
from sisosd.constants import (
    CODE_RATE,
    MODULATIONS,
    ClipMode,
    EnumMode,
    QrdMode,
    )
import sisosd.utils.misc


TRUE_STRINGS = {"1", "true", "yes", "on"}
FALSE_STRINGS = {"0", "false", "no", "off", ""}


def parse_bool(value):
    if isinstance(value, bool):
        return value
    value_str = str(value).strip().lower()
    if value_str in TRUE_STRINGS:
        return True
    if value_str in FALSE_STRINGS:
        return False
    raise ValueError(f"Cannot interpret {value!r} as a boolean")


def parse_enum(enum_class, value):
    if isinstance(value, enum_class):
        return value
    try:
        return enum_class(str(value).strip().lower())
    except ValueError:
        valid = [member.value for member in enum_class]
        raise ValueError(
            f"{value!r} is not a valid {enum_class.__name__}; "
            f"choose one of {valid}") from None


def parse_modulation(value):
    value = str(value).strip().lower()
    try:
        return value, MODULATIONS[value]
    except KeyError:
        raise ValueError(
            f"Unsupported modulation {value!r}; "
            f"choose one of {list(MODULATIONS)}") from None


class SimConfig(sisosd.utils.misc.AutoReprMixin):
    """Operating point description for one simulation campaign."""

    def __init__(
            self,
            mt=4,
            mr=4,
            modulation="16qam",
            snr_list=(10.0,),
            iterations=4,
            frames=100,
            l_e_max=(math.inf,),
            enum_mode=EnumMode.HYBRID,
            clip_mode=ClipMode.STRICT,
            qrd_mode=QrdMode.SQRD,
            k_info=512,
            seed=0,
            f_clk=250e6,
            interleaver_spread=16,
            max_frame_errors=100,
            target_fer=0.01,
            workers=1,
            noiseless=False,
            mapping_file=None,
            out=None,
            log_file=None,
                ):
        # pylint: disable=too-many-arguments, too-many-locals
        self.mt = int(mt)
        self.mr = int(mr)
        self.modulation, self.q = parse_modulation(modulation)
        self.snr_list = sisosd.utils.misc.split_list_arg(snr_list)
        self.iterations = int(iterations)
        self.frames = int(frames)
        self.l_e_max = sisosd.utils.misc.split_list_arg(l_e_max)
        self.enum_mode = parse_enum(EnumMode, enum_mode)
        self.clip_mode = parse_enum(ClipMode, clip_mode)
        self.qrd_mode = parse_enum(QrdMode, qrd_mode)
        self.k_info = int(k_info)
        self.seed = int(seed)
        self.f_clk = float(f_clk)
        self.code_rate = CODE_RATE
        self.interleaver_spread = int(interleaver_spread)
        self.max_frame_errors = int(max_frame_errors)
        self.target_fer = float(target_fer)
        self.workers = int(workers)
        self.noiseless = parse_bool(noiseless)
        self.mapping_file = mapping_file if mapping_file else None
        self.out = out if out else None
        self.log_file = log_file if log_file else None
        self.validate()

    def validate(self):
        # pylint: disable=too-many-boolean-expressions
        if self.mt < 1:
            raise ValueError(f"mt must be at least 1, not {self.mt}")
        if self.mr < self.mt:
            raise ValueError(
                f"mr ({self.mr}) must be at least mt ({self.mt})")
        if not self.snr_list:
            raise ValueError("At least one SNR point is required")
        if not all(math.isfinite(snr) for snr in self.snr_list):
            raise ValueError(f"SNR points must be finite: {self.snr_list}")
        if self.iterations < 1:
            raise ValueError(
                f"iterations must be at least 1, not {self.iterations}")
        if self.frames < 1:
            raise ValueError(f"frames must be at least 1, not {self.frames}")
        if not self.l_e_max or any(level <= 0 for level in self.l_e_max):
            raise ValueError(
                f"Clipping levels must be positive: {self.l_e_max}")
        if self.k_info < 1:
            raise ValueError(f"k_info must be at least 1, not {self.k_info}")
        if self.interleaver_spread < 1:
            raise ValueError("interleaver_spread must be at least 1, "
                             f"not {self.interleaver_spread}")
        if self.max_frame_errors < 0:
            raise ValueError("max_frame_errors must be nonnegative, "
                             f"not {self.max_frame_errors}")
        if not 0 < self.target_fer < 1:
            raise ValueError(
                f"target_fer must be in (0, 1), not {self.target_fer}")
        if self.workers < 0:
            raise ValueError(
                f"workers must be nonnegative, not {self.workers}")
        if not self.f_clk > 0:
            raise ValueError(f"f_clk must be positive, not {self.f_clk}")

    @classmethod
    def from_config(cls, config):
        """Build from a rendered (nested) sim config dict."""
        system = config.get("system", {})
        detector = config.get("detector", {})
        code = config.get("code", {})
        sim = config.get("sim", {})
        output = config.get("output", {})
        return cls(
            mt=system.get("mt", 4),
            mr=system.get("mr", 4),
            modulation=system.get("modulation", "16qam"),
            mapping_file=system.get("mapping_file", None),
            enum_mode=detector.get("enum_mode", EnumMode.HYBRID),
            clip_mode=detector.get("clip_mode", ClipMode.STRICT),
            l_e_max=detector.get("l_e_max", (math.inf,)),
            qrd_mode=detector.get("qrd_mode", QrdMode.SQRD),
            k_info=code.get("k_info", 512),
            interleaver_spread=code.get("interleaver_spread", 16),
            snr_list=sim.get("snr_db", (10.0,)),
            iterations=sim.get("iterations", 4),
            frames=sim.get("frames", 100),
            seed=sim.get("seed", 0),
            max_frame_errors=sim.get("max_frame_errors", 100),
            target_fer=sim.get("target_fer", 0.01),
            workers=sim.get("workers", 1),
            f_clk=sim.get("f_clk", 250e6),
            noiseless=sim.get("noiseless", False),
            out=output.get("out", None),
            log_file=output.get("log_file", None),
            )

    def to_metadata(self):
        """Ordered, human-readable key/value pairs describing the run."""
        return {
            "mt": self.mt,
            "mr": self.mr,
            "modulation": self.modulation,
            "bits_per_symbol": self.q,
            "mapping_file": (
                "" if self.mapping_file is None else str(self.mapping_file)),
            "snr_db": ",".join(f"{snr:g}" for snr in self.snr_list),
            "snr_definition": "M_T*E_s/N_0",
            "iterations": self.iterations,
            "frames": self.frames,
            "l_e_max_normalized": ",".join(
                f"{level:g}" for level in self.l_e_max),
            "enum_mode": self.enum_mode.value,
            "clip_mode": self.clip_mode.value,
            "qrd_mode": self.qrd_mode.value,
            "k_info": self.k_info,
            "code_rate": self.code_rate,
            "seed": self.seed,
            "f_clk_hz": f"{self.f_clk:g}",
            "max_frame_errors": self.max_frame_errors,
            "target_fer": f"{self.target_fer:g}",
            "noiseless": self.noiseless,
            }
