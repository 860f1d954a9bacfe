"""Base class for the trading curves of constant-function pools."""

from abc import ABCMeta, abstractmethod
from math import nextafter
from typing import ClassVar, Sequence

from amm_lab.errors import PoolExhaustedError
from amm_lab.types import PoolKind

__all__ = ("Curve",)


class Curve(metaclass=ABCMeta):
    """Interface specification for the trading curve of a constant-function
    pool family.

    Curves work on plain reserves and weights; fee handling, asset lookup and
    state bookkeeping are the job of the swap engine. Every amount handed to
    a curve is the *effective* input, i.e. the part of the incoming amount
    that remains after the fee was deducted.
    """

    kind: ClassVar[PoolKind]

    @abstractmethod
    def invariant(self, balances: Sequence[float], weights: Sequence[float]) -> float:
        """Returns the value that the curve holds constant for the given
        reserves.
        """
        raise NotImplementedError

    @abstractmethod
    def marginal_price(
        self, base: float, quote: float, w_base: float, w_quote: float
    ) -> float:
        """Returns the fee-free marginal price of the base asset, expressed
        in units of the quote asset.

        Parameters:
            base: reserve of the base asset
            quote: reserve of the quote asset
            w_base: weight of the base asset
            w_quote: weight of the quote asset
        """
        raise NotImplementedError

    @abstractmethod
    def output_for_input(
        self, b_in: float, b_out: float, w_in: float, w_out: float, amount: float
    ) -> float:
        """Returns the amount of the output asset released by the curve when
        the given effective amount of the input asset is added.

        Raises:
            PoolExhaustedError: if the curve would release the entire output
                reserve or more
        """
        raise NotImplementedError

    @abstractmethod
    def input_for_output(
        self, b_in: float, b_out: float, w_in: float, w_out: float, amount: float
    ) -> float:
        """Returns the effective amount of the input asset that the curve
        requires to release the given amount of the output asset.

        Raises:
            PoolExhaustedError: if the requested amount is not smaller than
                the output reserve
        """
        raise NotImplementedError

    @staticmethod
    def _strictly_below(output: float, reserve: float) -> float:
        """Caps an output that rounded up to the reserve at the largest float
        below it.
        """
        return min(output, nextafter(reserve, 0.0))

    @staticmethod
    def _ensure_below_reserve(amount: float, reserve: float) -> None:
        if amount >= reserve:
            raise PoolExhaustedError(amount, reserve)
