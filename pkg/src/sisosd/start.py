#!/usr/bin/env python3
"""
Implementation of the sisosd run and golden commands.
"""

# pylint: disable=import-outside-toplevel

# Standard library imports
import logging

# Local imports
from sisosd.constants import (
    OUT_PATH_DEFAULT,
    PACKAGE_NAME,
    ExitCode,
    QrdMode,
    )
import sisosd.utils.log


SUMMARY_HEADER = (
    f"{'SNR dB':>7} {'L_E,max':>8} {'iter':>4} {'frames':>6} "
    f"{'FER':>9} {'BER':>9} {'E[N_en]':>9} {'cum.':>9} {'Theta Mb/s':>10}")


# --- Helper functions --- #

def generate_version_message():
    import sisosd
    import numpy
    return (f"{PACKAGE_NAME} version {sisosd.__version__} "
            f"(numpy {numpy.__version__})")


def log_error(e, logger, message):
    logger.critical("%s %s: %s", type(e).__name__, message, e)
    logger.info("Error details:", exc_info=True)


def setup_file_logging(log_file, verbose=0, quiet=0):
    from sisosd.config.log import LOG_CONFIG
    console_level = sisosd.utils.log.determine_log_level(verbose - quiet)
    sisosd.utils.log.setup_full_logging(
        LOG_CONFIG,
        log_file=log_file,
        log_level_file=logging.DEBUG,
        log_level_console=console_level,
        )


def format_summary(stats):
    lines = [SUMMARY_HEADER]
    for row in stats.rows:
        lines.append(
            f"{row.snr_db:>7g} {row.l_e_max:>8g} {row.iteration:>4d} "
            f"{row.frames:>6d} {row.fer:>9.3e} {row.ber:>9.3e} "
            f"{row.mean_n_en:>9.2f} {row.cumulative_n_en:>9.2f} "
            f"{row.theta / 1e6:>10.2f}")
    return "\n".join(lines)


# --- Commands --- #

def run(verbose=0, quiet=0, config_path=None, **cli_args):
    import sisosd.config.sim
    import sisosd.outputs.csvfile
    import sisosd.simulate.harness

    sisosd.utils.log.setup_basic_logging(
        verbose=verbose, quiet=quiet, script_mode=True)
    logger = logging.getLogger(__name__)

    try:
        cfg = sisosd.config.sim.render_sim_config(
            cli_args, config_path=config_path)
    except ValueError as e:
        log_error(e, logger, "in simulation config")
        return ExitCode.USAGE
    except (OSError, SystemExit) as e:
        log_error(e, logger, "reading simulation config")
        return ExitCode.RUNTIME

    if cfg.log_file is not None:
        setup_file_logging(cfg.log_file, verbose=verbose, quiet=quiet)
    logger.info("Starting %s", generate_version_message())
    logger.debug("Simulation config: %r", cfg)

    try:
        stats = sisosd.simulate.harness.run_simulation(
            cfg, log_filter_level=logging.getLogger().getEffectiveLevel())
        schedule = stats.schedule()
        for line in schedule.summary_lines():
            logger.info("%s", line)
        out_path = sisosd.outputs.csvfile.write_results_csv(
            stats, cfg.out or OUT_PATH_DEFAULT, schedule=schedule)
    except (ValueError, OSError, RuntimeError) as e:
        log_error(e, logger, "running simulation")
        return ExitCode.RUNTIME

    print(format_summary(stats))
    logger.info("Wrote %s result rows to %r",
                len(stats.rows), out_path.as_posix())
    return ExitCode.OK


@sisosd.utils.log.basic_logging
def golden(action, path, qrd=None):
    import sisosd.outputs.golden
    logger = logging.getLogger(__name__)

    try:
        if action == "export":
            sisosd.outputs.golden.export_golden(
                path, qrd_mode=QrdMode.SQRD if qrd is None else qrd)
            return ExitCode.OK
        report = sisosd.outputs.golden.check_golden(path, qrd_mode=qrd)
    except (ValueError, OSError, KeyError) as e:
        log_error(e, logger, f"during golden {action} of {path!r}")
        return ExitCode.RUNTIME

    if not report.passed:
        logger.error("Golden check of %r failed: %s",
                     str(path), report.first_divergence)
        return ExitCode.GOLDEN_MISMATCH
    logger.info("Golden check of %r passed (%s records)",
                str(path), report.n_records)
    return ExitCode.OK
