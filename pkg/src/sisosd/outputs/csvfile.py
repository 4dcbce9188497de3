"""
Results output to a CSV file with commented metadata header lines.
"""

# Standard library imports
import csv
import datetime
import logging
from pathlib import Path

# Local imports
from sisosd.constants import CSV_SCHEMA_VERSION
import sisosd


CSV_KWARGS_DEFAULT = {
    "extrasaction": "ignore",
    "dialect": "unix",
    "delimiter": ",",
    "quoting": csv.QUOTE_MINIMAL,
    "strict": False,
    }

CSV_COLUMNS = [
    "snr_db",
    "iteration",
    "frames",
    "frame_errors",
    "fer",
    "ber",
    "mean_n_en",
    "cumulative_n_en",
    "theta_bps",
    "l_e_max_normalized",
    "enum_mode",
    "seed",
    ]

CODE_DESCRIPTION = ("convolutional K=7 (133, 171) octal, rate 1/2, "
                    "zero-terminated; max-log BCJR")
PADDING_DESCRIPTION = "known zero bits appended after interleaving"


def format_value(value):
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def stats_to_rows(stats):
    cfg = stats.cfg
    for row in stats.rows:
        yield {
            "snr_db": row.snr_db,
            "iteration": row.iteration,
            "frames": row.frames,
            "frame_errors": row.frame_errors,
            "fer": float(row.fer),
            "ber": float(row.ber),
            "mean_n_en": float(row.mean_n_en),
            "cumulative_n_en": float(row.cumulative_n_en),
            "theta_bps": float(row.theta),
            "l_e_max_normalized": float(row.l_e_max),
            "enum_mode": cfg.enum_mode.value,
            "seed": cfg.seed,
            }


def build_metadata(stats, schedule=None):
    metadata = {
        "csv_schema_version": CSV_SCHEMA_VERSION,
        "sisosd_version": sisosd.__version__,
        **stats.cfg.to_metadata(),
        "code": CODE_DESCRIPTION,
        "interleaver": "S-random",
        "interleaver_spread": stats.interleaver_spread,
        "padding": PADDING_DESCRIPTION,
        "pad_bits_per_frame": stats.n_pad,
        }
    if schedule is not None:
        metadata["schedule"] = schedule.summary_lines()
    return metadata


def write_results_csv(stats, path, schedule=None, created=None):
    logger = logging.getLogger(__name__)
    path = Path(path)
    if created is None:
        created = datetime.datetime.now(datetime.timezone.utc)
    metadata = build_metadata(stats, schedule=schedule)

    path.parent.mkdir(parents=True, exist_ok=True)
    logger.debug("Writing %s result rows to %r",
                 len(stats.rows), path.as_posix())
    with open(path, mode="w", encoding="utf-8", newline="") as output_file:
        for key, value in metadata.items():
            if isinstance(value, list):
                for item in value:
                    output_file.write(f"# {key}: {item}\n")
            else:
                output_file.write(f"# {key}: {format_value(value)}\n")
        output_file.write(
            f"# created: {created.isoformat(timespec='seconds')}\n")
        csv_writer = csv.DictWriter(
            output_file, fieldnames=CSV_COLUMNS, **CSV_KWARGS_DEFAULT)
        csv_writer.writeheader()
        for row in stats_to_rows(stats):
            csv_writer.writerow(
                {key: format_value(value) for key, value in row.items()})
    return path


def read_results_csv(path):
    """Read back (metadata, rows); metadata values stay strings."""
    metadata = {}
    data_lines = []
    with open(path, mode="r", encoding="utf-8", newline="") as input_file:
        for line in input_file:
            if line.startswith("#"):
                key, __, value = line[1:].strip().partition(": ")
                if key in metadata:
                    if not isinstance(metadata[key], list):
                        metadata[key] = [metadata[key]]
                    metadata[key].append(value)
                else:
                    metadata[key] = value
            else:
                data_lines.append(line)
    rows = list(csv.DictReader(data_lines))
    return metadata, rows
