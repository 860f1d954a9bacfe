"""Swap engine for constant-function market makers: constant product,
constant sum and constant mean pools.

The fee is deducted from the incoming leg before the curve is evaluated:
a trader sending ``amount`` moves the curve by ``gamma * amount`` only, while
the whole ``amount`` is added to the input reserve so the fee accrues to the
liquidity providers and the invariant grows.
"""

from typing import Optional, Tuple

from amm_lab.curves import Curve, find as find_curve
from amm_lab.errors import EmptyReserveError, UnknownAssetError
from amm_lab.types import (
    Amount,
    AssetId,
    PoolState,
    Price,
    SwapQuote,
    check_input_amount,
)

__all__ = (
    "invariant_value",
    "quote_input_for_exact_output",
    "quote_output_for_exact_input",
    "spot_price",
    "swap",
)


def _curve_of(pool: PoolState) -> Curve:
    return find_curve(pool.kind)


def _ensure_initialized(pool: PoolState) -> None:
    if not pool.is_initialized:
        raise EmptyReserveError("the pool has no liquidity")


def _resolve_pair(
    pool: PoolState, asset: AssetId, counterpart: Optional[AssetId]
) -> Tuple[int, int]:
    """Returns the indices of an asset and its trading counterpart."""
    if counterpart is None:
        counterpart = pool.other_asset(asset)
    i, j = pool.index_of(asset), pool.index_of(counterpart)
    if i == j:
        raise UnknownAssetError(
            counterpart, f"cannot trade {asset!r} against itself"
        )
    return i, j


def invariant_value(pool: PoolState) -> float:
    """Returns the value that the pool's curve holds constant: the product,
    the sum or the weighted geometric mean of the reserves.

    Raises:
        EmptyReserveError: if the pool has not received liquidity yet
    """
    _ensure_initialized(pool)
    return _curve_of(pool).invariant(pool.balances, pool.weights)


def spot_price(pool: PoolState, base: AssetId, quote: AssetId) -> Price:
    """Returns the marginal price of the base asset in units of the quote
    asset, i.e. the amount of quote tokens a trader has to send to receive
    an infinitesimal amount of base tokens, fee included.

    Parameters:
        pool: the pool to query
        base: the asset being priced
        quote: the asset in which the price is expressed

    Raises:
        UnknownAssetError: if either asset is not part of the pool
        EmptyReserveError: if the reserves are empty
    """
    i, j = pool.index_of(base), pool.index_of(quote)
    b_base, b_quote = pool.balances[i], pool.balances[j]
    if b_base <= 0 or b_quote <= 0:
        raise EmptyReserveError(f"empty reserve in pair {base!r}/{quote!r}")
    marginal = _curve_of(pool).marginal_price(
        b_base, b_quote, pool.weights[i], pool.weights[j]
    )
    return marginal / pool.fee.gamma


def quote_output_for_exact_input(
    pool: PoolState,
    input_asset: AssetId,
    amount: Amount,
    output_asset: Optional[AssetId] = None,
) -> Amount:
    """Returns the amount of the output asset that a trader receives for
    sending exactly the given amount of the input asset.

    Parameters:
        pool: the pool to trade with
        input_asset: the asset sent to the pool
        amount: the amount sent; zero yields zero
        output_asset: the asset received; may be omitted for two-asset pools

    Raises:
        NonPositiveInputError: if the amount is negative
        PoolExhaustedError: if a constant sum pool would release its entire
            output reserve or more; constant product and constant mean
            outputs stay strictly below the reserve
    """
    amount = check_input_amount(amount, allow_zero=True)
    _ensure_initialized(pool)
    i, j = _resolve_pair(pool, input_asset, output_asset)
    if amount == 0:
        return 0.0

    b_in, b_out = pool.balances[i], pool.balances[j]
    return _curve_of(pool).output_for_input(
        b_in, b_out, pool.weights[i], pool.weights[j], pool.fee.effective(amount)
    )


def quote_input_for_exact_output(
    pool: PoolState,
    output_asset: AssetId,
    amount: Amount,
    input_asset: Optional[AssetId] = None,
) -> Amount:
    """Returns the amount of the input asset that a trader has to send to
    receive exactly the given amount of the output asset, fee included.

    This is the inverse of `quote_output_for_exact_input()`.

    Parameters:
        pool: the pool to trade with
        output_asset: the asset to receive
        amount: the amount to receive; zero yields zero
        input_asset: the asset to send; may be omitted for two-asset pools

    Raises:
        NonPositiveInputError: if the amount is negative
        PoolExhaustedError: if the amount is not smaller than the output
            reserve
    """
    amount = check_input_amount(amount, allow_zero=True)
    _ensure_initialized(pool)
    j, i = _resolve_pair(pool, output_asset, input_asset)
    if amount == 0:
        return 0.0

    effective = _curve_of(pool).input_for_output(
        pool.balances[i],
        pool.balances[j],
        pool.weights[i],
        pool.weights[j],
        amount,
    )
    return effective / pool.fee.gamma


def swap(
    pool: PoolState,
    input_asset: AssetId,
    input_amount: Amount,
    output_asset: Optional[AssetId] = None,
) -> SwapQuote:
    """Executes a swap against the pool and returns the quote together with
    the post-trade state.

    The whole input amount is added to the input reserve; the curve only
    sees ``gamma * input_amount`` so the fee stays in the pool.

    Parameters:
        pool: the pool to trade with
        input_asset: the asset sent to the pool
        input_amount: the amount sent; must be positive
        output_asset: the asset received; may be omitted for two-asset pools

    Raises:
        NonPositiveInputError: if the input amount is not positive
        PoolExhaustedError: if a constant sum pool cannot cover the output
        UnknownAssetError: if either asset is not part of the pool
    """
    input_amount = check_input_amount(input_amount)
    _ensure_initialized(pool)
    i, j = _resolve_pair(pool, input_asset, output_asset)
    input_asset, output_asset = pool.assets[i], pool.assets[j]

    output_amount = quote_output_for_exact_input(
        pool, input_asset, input_amount, output_asset
    )
    new_state = pool.with_balances(
        {
            input_asset: pool.balances[i] + input_amount,
            output_asset: pool.balances[j] - output_amount,
        }
    )

    return SwapQuote(
        input_asset=input_asset,
        output_asset=output_asset,
        input_amount=input_amount,
        output_amount=output_amount,
        fee_paid=pool.fee.fee_on(input_amount),
        spot_before=spot_price(pool, output_asset, input_asset),
        spot_after=spot_price(new_state, output_asset, input_asset),
        new_state=new_state,
    )
