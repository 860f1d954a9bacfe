"""Constant mean curve, ``prod(x_i ** w_i) = k``, for two to eight assets."""

from math import expm1, log1p, prod
from typing import Sequence

from amm_lab.types import PoolKind

from .base import Curve
from .registry import register

__all__ = ("ConstantMeanCurve",)


@register(PoolKind.CONSTANT_MEAN)
class ConstantMeanCurve(Curve):
    """Weighted geometric mean curve. A swap touches two reserves only; the
    others stay fixed, so the invariant restricted to the traded pair is
    ``b_in ** w_in * b_out ** w_out``.
    """

    def invariant(self, balances: Sequence[float], weights: Sequence[float]) -> float:
        return prod(b**w for b, w in zip(balances, weights))

    def marginal_price(
        self, base: float, quote: float, w_base: float, w_quote: float
    ) -> float:
        return (quote / w_quote) / (base / w_base)

    def output_for_input(
        self, b_in: float, b_out: float, w_in: float, w_out: float, amount: float
    ) -> float:
        # b_out * (1 - (b_in / (b_in + amount)) ** (w_in / w_out))
        output = -b_out * expm1(-(w_in / w_out) * log1p(amount / b_in))
        return self._strictly_below(output, b_out)

    def input_for_output(
        self, b_in: float, b_out: float, w_in: float, w_out: float, amount: float
    ) -> float:
        self._ensure_below_reserve(amount, b_out)
        # b_in * ((b_out / (b_out - amount)) ** (w_out / w_in) - 1)
        return b_in * expm1(-(w_out / w_in) * log1p(-amount / b_out))
