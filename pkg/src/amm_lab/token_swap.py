"""Token swap market maker: two reserves back a supply of intermediary
tokens, and an asset swap is a purchase of intermediary tokens with one
reserve asset followed by their sale for the other.

The model carries no fee. With equal reserve ratios the composed swap is
identical to a fee-free constant product swap; in general it matches a
two-asset constant mean pool whose weights are the reserve ratios (see
`to_constant_mean()`).
"""

from math import expm1, log1p
from typing import Tuple

from amm_lab.errors import PoolExhaustedError, SupplyExceededError
from amm_lab.types import (
    Amount,
    FeeParam,
    PoolKind,
    PoolState,
    Price,
    Side,
    SideLike,
    SwapQuote,
    TokenSwapState,
    check_input_amount,
)

__all__ = (
    "intermediary_input_for_output",
    "intermediary_price",
    "purchase_intermediary",
    "sell_intermediary",
    "swap_via_intermediary",
    "to_constant_mean",
    "token_swap_spot_price",
)


def intermediary_price(state: TokenSwapState, side: SideLike) -> Price:
    """Returns the price of one intermediary token in units of the reserve
    asset on the given side, ``B / (S * RR)``.
    """
    side = Side(side)
    return state.reserve(side) / (state.supply * state.rr(side))


def token_swap_spot_price(state: TokenSwapState, base: SideLike) -> Price:
    """Returns the marginal price of the asset on the ``base`` side in units
    of the asset on the other side, obtained by valuing both through the
    intermediary token.
    """
    base = Side(base)
    return intermediary_price(state, base.other) / intermediary_price(state, base)


def purchase_intermediary(
    state: TokenSwapState, side: SideLike, pay_amount: Amount
) -> Tuple[float, TokenSwapState]:
    """Mints intermediary tokens by paying reserve assets into one side.

    The number of minted tokens is ``S * ((1 + pay / B) ** RR - 1)``.

    Parameters:
        state: the current state
        side: the side whose asset is paid in
        pay_amount: the amount paid; zero mints nothing

    Returns:
        the number of minted tokens and the new state

    Raises:
        NonPositiveInputError: if the amount is negative
    """
    side = Side(side)
    pay_amount = check_input_amount(pay_amount, allow_zero=True)
    if pay_amount == 0:
        return 0.0, state

    reserve = state.reserve(side)
    minted = state.supply * expm1(state.rr(side) * log1p(pay_amount / reserve))
    return minted, state.updated(side, reserve + pay_amount, state.supply + minted)


def sell_intermediary(
    state: TokenSwapState, side: SideLike, burn_amount: float
) -> Tuple[Amount, TokenSwapState]:
    """Burns intermediary tokens in exchange for reserve assets from one
    side.

    The amount received is ``B * (1 - (1 - burn / S) ** (1 / RR))`` where
    ``S`` is the supply of the given state. When the burned tokens were just
    minted, ``S`` is the post-mint supply, so ``1 - burn / S`` equals
    ``1 - burn / (S_pre + burn)`` in terms of the supply before the mint.

    Parameters:
        state: the current state
        side: the side whose asset is paid out
        burn_amount: the number of intermediary tokens burned; zero yields
            nothing

    Returns:
        the amount of the reserve asset received and the new state

    Raises:
        NonPositiveInputError: if the amount is negative
        SupplyExceededError: if the burn would consume the entire supply
    """
    side = Side(side)
    burn_amount = check_input_amount(burn_amount, allow_zero=True)
    if burn_amount == 0:
        return 0.0, state
    if burn_amount >= state.supply:
        raise SupplyExceededError(
            f"cannot burn {burn_amount!r} tokens out of a supply of {state.supply!r}"
        )

    reserve = state.reserve(side)
    received = -reserve * expm1(log1p(-burn_amount / state.supply) / state.rr(side))
    return received, state.updated(
        side, reserve - received, state.supply - burn_amount
    )


def swap_via_intermediary(
    state: TokenSwapState, input_side: SideLike, input_amount: Amount
) -> SwapQuote:
    """Swaps one reserve asset for the other by first converting the input
    to intermediary tokens and then converting those tokens to the output
    asset.

    The sale leg is evaluated against the post-mint supply; the supply is
    back to its original value once the swap is complete.

    Parameters:
        state: the current state
        input_side: the side whose asset is paid in
        input_amount: the amount paid in; zero yields a null quote

    Raises:
        NonPositiveInputError: if the amount is negative
    """
    input_side = Side(input_side)
    output_side = input_side.other

    minted, intermediate = purchase_intermediary(state, input_side, input_amount)
    received, new_state = sell_intermediary(intermediate, output_side, minted)

    return SwapQuote(
        input_asset=state.asset(input_side),
        output_asset=state.asset(output_side),
        input_amount=float(input_amount),
        output_amount=received,
        fee_paid=0.0,
        spot_before=token_swap_spot_price(state, output_side),
        spot_after=token_swap_spot_price(new_state, output_side),
        new_state=new_state,
    )


def intermediary_input_for_output(
    state: TokenSwapState, output_side: SideLike, amount: Amount
) -> Amount:
    """Returns the amount of the opposite asset that has to be swapped via
    the intermediary token to receive exactly the given amount from the
    ``output_side`` reserve.

    Raises:
        NonPositiveInputError: if the amount is negative
        PoolExhaustedError: if the amount is not smaller than the reserve
    """
    output_side = Side(output_side)
    input_side = output_side.other
    amount = check_input_amount(amount, allow_zero=True)
    if amount == 0:
        return 0.0

    b_out = state.reserve(output_side)
    if amount >= b_out:
        raise PoolExhaustedError(amount, b_out)

    exponent = state.rr(output_side) / state.rr(input_side)
    return state.reserve(input_side) * expm1(-exponent * log1p(-amount / b_out))


def to_constant_mean(state: TokenSwapState) -> PoolState:
    """Returns the fee-free two-asset constant mean pool that trades exactly
    like the given token swap state: same reserves, reserve ratios as
    weights.
    """
    return PoolState(
        kind=PoolKind.CONSTANT_MEAN,
        assets=(state.asset_a, state.asset_b),
        balances=(state.reserve_a, state.reserve_b),
        weights=(state.rr_a, state.rr_b),  # type: ignore
        fee=FeeParam(1.0),
    )
