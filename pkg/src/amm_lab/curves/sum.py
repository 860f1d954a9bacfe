"""Constant sum curve, ``x + y = k``."""

from math import fsum
from typing import Sequence

from amm_lab.types import PoolKind

from .base import Curve
from .registry import register

__all__ = ("ConstantSumCurve",)


@register(PoolKind.CONSTANT_SUM)
class ConstantSumCurve(Curve):
    """Straight-line curve trading one to one until the output reserve is
    gone. Trades that would drain the output reserve are rejected.
    """

    def invariant(self, balances: Sequence[float], weights: Sequence[float]) -> float:
        return fsum(balances)

    def marginal_price(
        self, base: float, quote: float, w_base: float, w_quote: float
    ) -> float:
        return 1.0

    def output_for_input(
        self, b_in: float, b_out: float, w_in: float, w_out: float, amount: float
    ) -> float:
        self._ensure_below_reserve(amount, b_out)
        return amount

    def input_for_output(
        self, b_in: float, b_out: float, w_in: float, w_out: float, amount: float
    ) -> float:
        self._ensure_below_reserve(amount, b_out)
        return amount
