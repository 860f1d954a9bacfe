"""Liquidity provider share accounting: minting shares against balanced
deposits and redeeming shares for a proportional slice of the reserves
(including every fee accrued in the meantime).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isclose, prod
from typing import Dict, Mapping, Tuple

from amm_lab.errors import (
    NonPositiveInputError,
    SharesExceededError,
    UnbalancedDepositError,
    UnknownAssetError,
)
from amm_lab.types import AssetId, PoolState, Price, check_input_amount

__all__ = ("LPPosition", "deposit", "mint_shares", "redeem_shares", "withdraw")

#: Relative tolerance of the proportionality check on deposits
BALANCE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class LPPosition:
    """A liquidity position: a number of shares together with the reserves
    it was entitled to and the fee-free reserve price (quote reserve over
    base reserve) of the pool when it was opened.
    """

    shares: float
    entry_reserves: Tuple[float, ...]
    entry_price: Price

    def __post_init__(self):
        if self.shares < 0:
            raise NonPositiveInputError(self.shares, "share count cannot be negative")

    def hold_value(self, price: Price) -> float:
        """Value of the entry reserves of a two-asset pool at the given
        price of the base asset, in quote units.
        """
        base, quote = self.entry_reserves
        return base * price + quote


def _deposit_amounts(pool: PoolState, amounts: Mapping[AssetId, float]) -> Tuple[float, ...]:
    unknown = set(amounts) - set(pool.assets)
    if unknown:
        raise UnknownAssetError(sorted(unknown)[0])
    return tuple(
        check_input_amount(amounts.get(asset, 0.0)) for asset in pool.assets
    )


def mint_shares(
    pool: PoolState, amounts: Mapping[AssetId, float], total_shares: float
) -> float:
    """Returns the number of shares minted for a deposit.

    The first deposit into an empty pool mints the geometric mean of the
    deposited amounts (``sqrt(a * b)`` for two assets). Later deposits must
    be proportional to the current reserves and mint ``S * d / B`` shares,
    evaluated on the pool's second asset.

    Parameters:
        pool: the pool before the deposit
        amounts: the deposited amount of every asset of the pool
        total_shares: the number of shares outstanding before the deposit

    Raises:
        NonPositiveInputError: if an amount is missing or not positive
        UnbalancedDepositError: if the deposit is not proportional to the
            reserves
    """
    deposit_amounts = _deposit_amounts(pool, amounts)

    if total_shares <= 0 or not pool.is_initialized:
        return prod(deposit_amounts) ** (1.0 / len(deposit_amounts))

    ratios = [d / b for d, b in zip(deposit_amounts, pool.balances)]
    if not all(isclose(r, ratios[0], rel_tol=BALANCE_TOLERANCE) for r in ratios):
        raise UnbalancedDepositError(
            f"deposit {dict(zip(pool.assets, deposit_amounts))!r} is not "
            f"proportional to the reserves {pool.reserves!r}"
        )
    return total_shares * ratios[1]


def redeem_shares(
    pool: PoolState, shares: float, total_shares: float
) -> Dict[AssetId, float]:
    """Returns the amounts of every asset paid out for redeeming shares,
    ``shares / total_shares`` of each reserve.

    Raises:
        NonPositiveInputError: if the share count is not positive
        SharesExceededError: if more shares are redeemed than outstanding
    """
    shares = check_input_amount(shares)
    if shares > total_shares:
        raise SharesExceededError(
            f"cannot redeem {shares!r} shares out of {total_shares!r}"
        )
    if shares == total_shares:
        return pool.reserves

    fraction = shares / total_shares
    return {asset: balance * fraction for asset, balance in pool.reserves.items()}


def deposit(
    pool: PoolState, amounts: Mapping[AssetId, float], total_shares: float
) -> Tuple[float, PoolState]:
    """Mints shares for a deposit and returns them together with the new
    pool state.
    """
    minted = mint_shares(pool, amounts, total_shares)
    new_state = pool.with_balances(
        {asset: pool.balance_of(asset) + amounts[asset] for asset in pool.assets}
    )
    return minted, new_state


def withdraw(
    pool: PoolState, shares: float, total_shares: float
) -> Tuple[Dict[AssetId, float], PoolState]:
    """Redeems shares and returns the amounts paid out together with the new
    pool state. Burning every share empties the pool exactly.
    """
    amounts = redeem_shares(pool, shares, total_shares)
    if shares == total_shares:
        new_state = pool.with_balances({asset: 0.0 for asset in pool.assets})
    else:
        new_state = pool.with_balances(
            {asset: pool.balance_of(asset) - amounts[asset] for asset in pool.assets}
        )
    return amounts, new_state
