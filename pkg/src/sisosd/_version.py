"""Version file."""

VERSION_INFO = (0, 1, 0, "dev0")
__version__ = ".".join((str(version) for version in VERSION_INFO))
