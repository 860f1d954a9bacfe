"""Various utilities used throughout the AMM laboratory."""

from .numeric import relative_error, sums_to_one
from .timing import timing

__all__ = ("relative_error", "sums_to_one", "timing")
