"""Constant product curve, ``x * y = k``."""

from typing import Sequence

from amm_lab.types import PoolKind

from .base import Curve
from .registry import register

__all__ = ("ConstantProductCurve",)


@register(PoolKind.CONSTANT_PRODUCT)
class ConstantProductCurve(Curve):
    """Hyperbolic curve holding the product of the two reserves constant.
    The pool can never be emptied: the output approaches the reserve only
    as the input grows without bounds.
    """

    def invariant(self, balances: Sequence[float], weights: Sequence[float]) -> float:
        x, y = balances
        return x * y

    def marginal_price(
        self, base: float, quote: float, w_base: float, w_quote: float
    ) -> float:
        return quote / base

    def output_for_input(
        self, b_in: float, b_out: float, w_in: float, w_out: float, amount: float
    ) -> float:
        return self._strictly_below(b_out * amount / (b_in + amount), b_out)

    def input_for_output(
        self, b_in: float, b_out: float, w_in: float, w_out: float, amount: float
    ) -> float:
        self._ensure_below_reserve(amount, b_out)
        return b_in * amount / (b_out - amount)
