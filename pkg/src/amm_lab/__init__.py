"""Desk-scale laboratory for automated market maker microstructure."""

from .cfmm import invariant_value, spot_price, swap
from .errors import AMMError
from .token_swap import swap_via_intermediary
from .types import FeeParam, PoolKind, PoolState, SwapQuote, TokenSwapState
from .version import __version__, __version_info__

__all__ = (
    "AMMError",
    "FeeParam",
    "PoolKind",
    "PoolState",
    "SwapQuote",
    "TokenSwapState",
    "invariant_value",
    "spot_price",
    "swap",
    "swap_via_intermediary",
    "__version__",
    "__version_info__",
)
