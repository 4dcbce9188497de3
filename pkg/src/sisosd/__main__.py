#!/usr/bin/env python3
"""
Main-level sisosd entry point.
"""

# Standard library imports
import multiprocessing
import sys

# Local imports
import sisosd.utils.cli


def main():
    sys.exit(sisosd.utils.cli.main())


if __name__ == "__main__":
    multiprocessing.freeze_support()
    main()
