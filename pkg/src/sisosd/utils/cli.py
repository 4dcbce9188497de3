#!/usr/bin/env python3
"""
Main-level command handling routine for running sisosd on the command line.
"""

# Standard library imports
import argparse
import multiprocessing
import sys

# Local imports
from sisosd.constants import (
    MODULATIONS,
    ClipMode,
    EnumMode,
    ExitCode,
    QrdMode,
    )
import sisosd.utils.misc


VERSION_PARAM = "version"
SUBCOMMAND_PARAM = "subcommand_name"
GOLDEN_ACTION_PARAM = "action"


class ArgumentParser(argparse.ArgumentParser):
    """Parser whose usage errors exit with the usage exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(int(ExitCode.USAGE), f"{self.prog}: error: {message}\n")


def float_list(value):
    try:
        values = sisosd.utils.misc.split_list_arg(value, convert=float)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"{value!r} is not a comma-separated list of numbers") from None
    if not values:
        raise argparse.ArgumentTypeError("Expected at least one value")
    return values


def add_verbosity_args(parser):
    parser.add_argument(
        "-v", "--verbose", action="count", default=0,
        help="Verbosity level; pass -v, -vv or -vvv for more verbosity")
    parser.add_argument(
        "-q", "--quiet", action="count", default=0,
        help="Quietness level; pass -q, -qq or -qqq for more silence")


def generate_argparser_main():
    parser_main = ArgumentParser(
        prog="sisosd",
        description=("Soft-input soft-output single tree-search sphere "
                     "decoding and iterative MIMO receiver simulation."),
        argument_default=argparse.SUPPRESS)
    parser_main.add_argument(
        "--version", action="store_true", dest=VERSION_PARAM,
        help="If passed, will print the version and exit")
    subparsers = parser_main.add_subparsers(
        title="Subcommands", help="Subcommand to execute",
        metavar="Subcommand", dest=SUBCOMMAND_PARAM)

    # Parser for the version subcommand
    subparsers.add_parser(
        VERSION_PARAM, help="Print sisosd's version, and then exit")

    # Parser for the help subcommand
    subparsers.add_parser(
        "help", help="Print help on sisosd's command line arguments")

    # Parser for the run subcommand
    desc_run = "Simulate the iterative receiver and write per-iteration stats"
    parser_run = subparsers.add_parser(
        "run", help=desc_run, description=desc_run,
        argument_default=argparse.SUPPRESS)
    parser_run.add_argument(
        "--mt", type=int, help="Number of transmit antennas")
    parser_run.add_argument(
        "--mr", type=int, help="Number of receive antennas")
    parser_run.add_argument(
        "--mod", choices=list(MODULATIONS), help="Square QAM modulation")
    parser_run.add_argument(
        "--mapping-file",
        help="Bit-to-symbol table to use instead of the default Gray map")
    parser_run.add_argument(
        "--snr", type=float_list,
        help="Comma-separated SNR points in dB (SNR = M_T E_s / N_0)")
    parser_run.add_argument(
        "--iters", type=int, help="Detector-decoder iterations per frame")
    parser_run.add_argument(
        "--frames", type=int, help="Maximum frames per SNR point")
    parser_run.add_argument(
        "--lemax", type=float_list,
        help="Comma-separated normalized clipping levels N_0 L^E_max, or inf")
    parser_run.add_argument(
        "--enum", choices=[mode.value for mode in EnumMode],
        help="Child enumeration of the tree search")
    parser_run.add_argument(
        "--clip-mode", choices=[mode.value for mode in ClipMode],
        help="Clamp used in the pruning radius")
    parser_run.add_argument(
        "--qrd", choices=[mode.value for mode in QrdMode],
        help="Channel preprocessing (plain or sorted QR)")
    parser_run.add_argument(
        "--kinfo", type=int, help="Information bits per frame")
    parser_run.add_argument(
        "--spread", type=int, help="S-random interleaver spread")
    parser_run.add_argument(
        "--seed", type=int, help="Seed of all random streams")
    parser_run.add_argument(
        "--fclk", type=float, help="Detector clock frequency in Hz")
    parser_run.add_argument(
        "--max-errors", type=int,
        help="Stop a point after this many frame errors (0 to disable)")
    parser_run.add_argument(
        "--target-fer", type=float,
        help="FER target of the least-effort schedule")
    parser_run.add_argument(
        "--workers", type=int,
        help="Frame worker processes (0 for one per CPU)")
    parser_run.add_argument(
        "--noiseless", action="store_true",
        help="If passed, suppress the channel noise")
    parser_run.add_argument(
        "--out", help="Path of the CSV results file")
    parser_run.add_argument(
        "--log-file", help="Also log to this (rotating) file")
    parser_run.add_argument(
        "--config", dest="config_path",
        help="TOML or JSON config file to layer under the CLI arguments")
    add_verbosity_args(parser_run)

    # Parser for the golden subcommand
    desc_golden = "Export or check golden detector vectors"
    parser_golden = subparsers.add_parser(
        "golden", help=desc_golden, description=desc_golden,
        argument_default=argparse.SUPPRESS)
    parser_golden.add_argument(
        GOLDEN_ACTION_PARAM, choices=["export", "check"],
        help="Write a new golden file or check against an existing one")
    parser_golden.add_argument(
        "path", help="Path of the golden JSON Lines file")
    parser_golden.add_argument(
        "--qrd", choices=[mode.value for mode in QrdMode],
        help="Preprocessing of the golden instances")
    add_verbosity_args(parser_golden)

    return parser_main


def parse_args(sys_argv=None):
    """Return the subcommand name and its own arguments.

    ``--version`` wins over any subcommand; no subcommand gives ``""``.
    """
    parsed_args = generate_argparser_main().parse_args(sys_argv)
    arg_values = vars(parsed_args)
    show_version = arg_values.pop(VERSION_PARAM, False)
    subcommand = arg_values.pop(SUBCOMMAND_PARAM, None) or ""
    if show_version:
        subcommand = VERSION_PARAM
    return subcommand.replace("-", "_"), parsed_args


def parse_run_config(sys_argv=None, environ=None):
    """Parse ``run`` arguments straight into a rendered SimConfig."""
    # pylint: disable=import-outside-toplevel
    import sisosd.config.sim
    __, parsed_args = parse_args(["run", *(sys_argv or [])])
    cli_args = vars(parsed_args)
    for arg_name in ("verbose", "quiet"):
        cli_args.pop(arg_name, None)
    config_path = cli_args.pop("config_path", None)
    return sisosd.config.sim.render_sim_config(
        cli_args, config_path=config_path, environ=environ)


# pylint: disable=import-outside-toplevel
def _print_version():
    import sisosd.start
    print(sisosd.start.generate_version_message())
    return ExitCode.OK


def _print_help():
    generate_argparser_main().print_help()
    return ExitCode.OK


def _run(**kwargs):
    import sisosd.start
    return sisosd.start.run(**kwargs)


def _golden(**kwargs):
    import sisosd.start
    return sisosd.start.golden(**kwargs)


COMMANDS = {
    VERSION_PARAM: _print_version,
    "help": _print_help,
    "run": _run,
    "golden": _golden,
    }


def dispatch_command(subcommand, parsed_args):
    command = COMMANDS.get(subcommand, None)
    if command is None:
        generate_argparser_main().print_usage()
        return ExitCode.USAGE
    if command in {_print_version, _print_help}:
        return command()
    return command(**parsed_args)


def main(sys_argv=None):
    """Run the command line; return the process exit code."""
    try:
        subcommand, parsed_args = parse_args(sys_argv)
    except SystemExit as e:
        return int(e.code or 0)
    return int(dispatch_command(subcommand, vars(parsed_args)))


if __name__ == "__main__":
    multiprocessing.freeze_support()
    sys.exit(main())
