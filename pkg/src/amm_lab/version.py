"""Version information for the AMM microstructure laboratory."""

__version_info__ = (0, 1, 0)
__version__ = ".".join("{0}".format(i) for i in __version_info__)
