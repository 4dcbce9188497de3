"""
Sisosd, a soft-input soft-output single tree-search sphere decoder toolkit.
"""

from sisosd._version import __version__
