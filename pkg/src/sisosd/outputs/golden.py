"""
Golden detector vectors: export to and check against JSON Lines files.

The first line is a header record; every further line holds one
detection problem (inputs) and the detector's expected outputs.
"""

# Standard library imports
import json
import logging
import math
from pathlib import Path

# Third party imports
import numpy as np

# Local imports
from sisosd.constants import (
    GOLDEN_FORMAT_NAME,
    GOLDEN_SEEDS,
    ClipMode,
    EnumMode,
    QrdMode,
    )
from sisosd.detect.sts import DetectorConfig, SisoStsDetector
import sisosd
import sisosd.mimo.channel
import sisosd.mimo.constellation
import sisosd.utils.misc


GOLDEN_TOLERANCE = 1e-9

# Cycled over the seeds so every mode and size is covered
GOLDEN_SHAPES = ((2, 2), (2, 4), (3, 2), (4, 4))
GOLDEN_ENUM_MODES = (
    EnumMode.HYBRID, EnumMode.FULL_SORT_SE, EnumMode.CHANNEL_ONLY)
GOLDEN_LEMAX_NORMALIZED = (math.inf, 0.8, math.inf, 0.2)


# --- Encoding helpers --- #

def complex_to_json(values):
    values = np.asarray(values, dtype=np.complex128)
    return np.stack([values.real, values.imag], axis=-1).tolist()


def complex_from_json(values):
    values = np.asarray(values, dtype=np.float64)
    return values[..., 0] + 1j * values[..., 1]


def float_to_json(value):
    return "inf" if math.isinf(value) else float(value)


def float_from_json(value):
    return float(value)


# --- Golden instances --- #

class GoldenRecord(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, index, seed, config, inputs, outputs=None):
        self.index = index
        self.seed = seed
        self.config = config
        self.inputs = inputs
        self.outputs = outputs

    def detector(self):
        constellation = sisosd.mimo.constellation.build_qam(
            self.config["q"])
        config = DetectorConfig(
            l_e_max=float_from_json(self.config["l_e_max"]),
            enum_mode=self.config["enum_mode"],
            clip_mode=self.config["clip_mode"],
            )
        return SisoStsDetector(constellation, config=config)

    def run(self):
        result = self.detector().detect(
            complex_from_json(self.inputs["y_tilde"]),
            complex_from_json(self.inputs["r"]),
            np.asarray(self.inputs["l_a"], dtype=np.float64),
            self.inputs["n0"],
            )
        return {
            "lambda": float(result.lambda_map),
            "x_map": result.x_map.tolist(),
            "l_e": result.l_e.tolist(),
            "n_en": int(result.n_en),
            }

    def to_json(self):
        return {
            "record": self.index,
            "seed": self.seed,
            "config": self.config,
            "inputs": self.inputs,
            "outputs": self.outputs,
            }

    @classmethod
    def from_json(cls, data):
        return cls(
            index=data["record"],
            seed=data["seed"],
            config=data["config"],
            inputs=data["inputs"],
            outputs=data["outputs"],
            )


def make_golden_record(index, seed, qrd_mode):
    rng = np.random.default_rng([seed])
    mt, q = GOLDEN_SHAPES[seed % len(GOLDEN_SHAPES)]
    enum_mode = GOLDEN_ENUM_MODES[seed % len(GOLDEN_ENUM_MODES)]
    l_e_max_normalized = GOLDEN_LEMAX_NORMALIZED[
        seed % len(GOLDEN_LEMAX_NORMALIZED)]
    constellation = sisosd.mimo.constellation.build_qam(q)

    snr_db = float(rng.uniform(4.0, 16.0))
    n0 = sisosd.mimo.channel.noise_variance(snr_db, mt)
    h = sisosd.mimo.channel.sample_channel(mt, mt, rng)
    symbols = constellation.points[
        rng.integers(0, constellation.n_symbols, size=mt)]
    y = sisosd.mimo.channel.transmit(h, symbols, n0, rng=rng)
    factorize = (sisosd.mimo.channel.sqrd if qrd_mode == QrdMode.SQRD
                 else sisosd.mimo.channel.qrd)
    qr = factorize(h)
    l_a = rng.normal(0.0, 4.0, size=(mt, q)) * (seed % 3 != 0)

    record = GoldenRecord(
        index=index,
        seed=seed,
        config={
            "mt": mt,
            "q": q,
            "enum_mode": enum_mode.value,
            "clip_mode": ClipMode.STRICT.value,
            "l_e_max": float_to_json(l_e_max_normalized / n0),
            },
        inputs={
            "y_tilde": complex_to_json(
                sisosd.mimo.channel.preprocess(y, qr)),
            "r": complex_to_json(qr.r),
            "l_a": l_a.tolist(),
            "n0": n0,
            },
        )
    record.outputs = record.run()
    return record


# --- Export and check --- #

class GoldenReport(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, n_records=0, divergences=None, error=None):
        self.n_records = n_records
        self.divergences = [] if divergences is None else divergences
        self.error = error

    @property
    def passed(self):
        return self.error is None and not self.divergences

    @property
    def first_divergence(self):
        if self.error is not None:
            return self.error
        return self.divergences[0] if self.divergences else None


def export_golden(path, qrd_mode=QrdMode.SQRD, seeds=GOLDEN_SEEDS):
    logger = logging.getLogger(__name__)
    path = Path(path)
    qrd_mode = QrdMode(qrd_mode)
    header = {
        "format": GOLDEN_FORMAT_NAME,
        "version": sisosd.__version__,
        "qrd_mode": qrd_mode.value,
        "tolerance": GOLDEN_TOLERANCE,
        "n_records": len(seeds),
        }
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, mode="w", encoding="utf-8", newline="\n") as out_file:
        out_file.write(json.dumps(header) + "\n")
        for index, seed in enumerate(seeds):
            record = make_golden_record(index, seed, qrd_mode)
            out_file.write(json.dumps(record.to_json()) + "\n")
    logger.info("Wrote %s golden records (%s) to %r",
                len(seeds), qrd_mode.value, path.as_posix())
    return path


def compare_outputs(expected, actual, tolerance=GOLDEN_TOLERANCE):
    """Return a description of the first mismatch, or None."""
    if expected["n_en"] != actual["n_en"]:
        return f"n_en {actual['n_en']} != expected {expected['n_en']}"
    if expected["x_map"] != actual["x_map"]:
        return f"x_map {actual['x_map']} != expected {expected['x_map']}"
    if not abs(expected["lambda"] - actual["lambda"]) <= tolerance:
        return f"lambda {actual['lambda']!r} != expected {expected['lambda']!r}"
    expected_l_e = np.asarray(expected["l_e"], dtype=np.float64)
    actual_l_e = np.asarray(actual["l_e"], dtype=np.float64)
    deviation = np.abs(expected_l_e - actual_l_e)
    deviation[expected_l_e == actual_l_e] = 0.0
    if not np.all(deviation <= tolerance):
        position = np.unravel_index(int(np.argmax(deviation)),
                                    deviation.shape)
        return (f"l_e{[int(index) for index in position]} "
                f"{float(actual_l_e[position])!r} != "
                f"expected {float(expected_l_e[position])!r}")
    return None


def check_golden(path, qrd_mode=None):
    logger = logging.getLogger(__name__)
    path = Path(path)
    with open(path, mode="r", encoding="utf-8") as in_file:
        lines = [line for line in in_file if line.strip()]
    if not lines:
        return GoldenReport(error=f"Golden file {path.as_posix()!r} is empty")

    header = json.loads(lines[0])
    if header.get("format", None) != GOLDEN_FORMAT_NAME:
        return GoldenReport(
            error=f"{path.as_posix()!r} is not a {GOLDEN_FORMAT_NAME} file")
    if not sisosd.utils.misc.check_version_compatible(
            header.get("version", "0"), logger=logger.error):
        return GoldenReport(
            error=f"Golden file written by newer version {header['version']}")
    if qrd_mode is not None and QrdMode(qrd_mode).value != header.get(
            "qrd_mode", None):
        return GoldenReport(
            error=f"Golden file holds {header.get('qrd_mode', None)} "
            f"vectors, not {QrdMode(qrd_mode).value}")

    report = GoldenReport()
    for line in lines[1:]:
        record = GoldenRecord.from_json(json.loads(line))
        report.n_records += 1
        mismatch = compare_outputs(record.outputs, record.run())
        if mismatch is not None:
            message = f"Record {record.index} (seed {record.seed}): {mismatch}"
            logger.debug("Golden divergence: %s", message)
            report.divergences.append(message)
    logger.info("Checked %s golden records from %r, %s divergent",
                report.n_records, path.as_posix(), len(report.divergences))
    return report
