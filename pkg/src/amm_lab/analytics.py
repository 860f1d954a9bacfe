"""Closed-form microstructure analytics of constant product pools: price
impact, impermanent loss, depth loss and arbitrage leveling, each paired
with a function that measures the same quantity by trading against a pool.

Sign conventions: price increases are positive, losses are negative
percentages for impermanent loss and positive percentages of output
shortfall for depth loss.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import isfinite, sqrt
from typing import Any, Dict, Iterable, List, Optional, Union

from amm_lab.cfmm import quote_input_for_exact_output, spot_price, swap
from amm_lab.errors import FOutOfRangeError, InvalidPoolError, NonPositiveXiError
from amm_lab.types import AssetId, FeeParam, PoolKind, PoolState, Price

__all__ = (
    "ArbitrageTrade",
    "DepthLossReport",
    "Direction",
    "ImpermanentLossReport",
    "PriceImpactReport",
    "arbitrage_to_price",
    "average_execution_price",
    "depth_curve",
    "depth_loss",
    "il_curve",
    "impact_curve",
    "impermanent_loss",
    "measured_depth_loss",
    "measured_impermanent_loss",
    "measured_price_impact",
    "pool_value",
    "price_impact",
)

#: Relative distance from the target below which leveling is a null trade
NULL_TRADE_TOLERANCE = 1e-12


class Direction(Enum):
    """Direction of a trade relative to the pool.

    ``BUY_FROM_POOL`` takes a fraction f of the base reserve out of the pool;
    ``SELL_TO_POOL`` adds a fraction f of the base reserve to the pool. Price
    changes always refer to the price of the base asset.
    """

    BUY_FROM_POOL = "buy_from_pool"
    SELL_TO_POOL = "sell_to_pool"

    @classmethod
    def to_direction(cls, value: Union[str, "Direction"]) -> "Direction":
        """Converts a direction or one of the strings ``buy``, ``sell``,
        ``buy_from_pool`` and ``sell_to_pool`` into a direction.
        """
        if isinstance(value, cls):
            return value
        return _direction_aliases.get(str(value), None) or cls(value)


_direction_aliases = {
    "buy": Direction.BUY_FROM_POOL,
    "sell": Direction.SELL_TO_POOL,
}

#: Type specification for objects that can be converted into a direction
DirectionLike = Union[str, Direction]


@dataclass(frozen=True)
class PriceImpactReport:
    f: float
    direction: Direction
    pct_change: float

    def to_json(self) -> Dict[str, Any]:
        return {"f": self.f, "direction": self.direction.value, "pct_change": self.pct_change}


@dataclass(frozen=True)
class ImpermanentLossReport:
    xi: float
    gamma: FeeParam
    pct_loss: float

    def to_json(self) -> Dict[str, Any]:
        return {"xi": self.xi, "gamma": self.gamma.gamma, "pct_loss": self.pct_loss}


@dataclass(frozen=True)
class DepthLossReport:
    f: float
    direction: Direction
    pct_loss: float

    def to_json(self) -> Dict[str, Any]:
        return {"f": self.f, "direction": self.direction.value, "pct_loss": self.pct_loss}


@dataclass(frozen=True)
class ArbitrageTrade:
    """Trade that levels a constant product pool to a reference price.

    ``input_amount`` of ``input_asset`` is sent to the pool and
    ``output_amount`` of ``output_asset`` is taken out. A null trade has no
    assets and zero amounts.
    """

    xi: float
    input_asset: Optional[AssetId]
    output_asset: Optional[AssetId]
    input_amount: float
    output_amount: float
    spot_before: Price
    spot_after: Price
    new_state: PoolState

    @property
    def is_null(self) -> bool:
        return self.input_asset is None

    def to_json(self) -> Dict[str, Any]:
        return {
            "xi": self.xi,
            "input_asset": self.input_asset,
            "output_asset": self.output_asset,
            "input_amount": self.input_amount,
            "output_amount": self.output_amount,
            "spot_before": self.spot_before,
            "spot_after": self.spot_after,
        }


def _check_fraction(f: float, direction: Direction) -> float:
    f = float(f)
    upper_ok = f < 1 if direction is Direction.BUY_FROM_POOL else isfinite(f)
    if not (f >= 0 and upper_ok):
        raise FOutOfRangeError(f)
    return f


def _ensure_constant_product(pool: PoolState) -> None:
    if pool.kind is not PoolKind.CONSTANT_PRODUCT:
        raise InvalidPoolError(
            f"this operation needs a constant product pool, got {pool.kind.value}"
        )


def price_impact(f: float, direction: DirectionLike) -> float:
    """Returns the percentage change of the base asset's price when a
    fraction f of its reserve is bought from (or sold to) a constant product
    pool.

    Buying gives ``(1 / (1 - f) ** 2 - 1) * 100``; selling gives
    ``-(1 - 1 / (1 + f) ** 2) * 100`` since the price of the sold asset
    falls.

    Raises:
        FOutOfRangeError: if f is negative, or at least 1 when buying
    """
    direction = Direction.to_direction(direction)
    f = _check_fraction(f, direction)
    if direction is Direction.BUY_FROM_POOL:
        return (1.0 / (1.0 - f) ** 2 - 1.0) * 100.0
    return -(1.0 - 1.0 / (1.0 + f) ** 2) * 100.0


def impermanent_loss(xi: float, gamma: Union[float, FeeParam] = 1.0) -> float:
    """Returns the percentage value change of a liquidity position relative
    to holding the deposited assets, after arbitrage moved the pool price by
    a factor of ``xi``:
    ``((sqrt(gamma * xi) + sqrt(xi / gamma)) / (1 + xi) - 1) * 100``.

    Raises:
        NonPositiveXiError: if xi is not positive
    """
    xi = float(xi)
    if not (xi > 0 and isfinite(xi)):
        raise NonPositiveXiError(f"price ratio must be positive, got {xi!r}")
    g = gamma.gamma if isinstance(gamma, FeeParam) else FeeParam(gamma).gamma
    return ((sqrt(g * xi) + sqrt(xi / g)) / (1.0 + xi) - 1.0) * 100.0


def depth_loss(f: float, direction: DirectionLike) -> float:
    """Returns the percentage of output that a trade of fraction f loses
    compared to an infinitely deep pool quoting the entry price: ``f * 100``
    when buying, ``(1 - 1 / (1 + f)) * 100`` when selling.

    Raises:
        FOutOfRangeError: if f is negative, or at least 1 when buying
    """
    direction = Direction.to_direction(direction)
    f = _check_fraction(f, direction)
    if direction is Direction.BUY_FROM_POOL:
        return f * 100.0
    return (1.0 - 1.0 / (1.0 + f)) * 100.0


def average_execution_price(pool: PoolState, f: float) -> Price:
    """Returns the average price per base token paid when buying a fraction
    f of the base reserve from a constant product pool, fee included:
    ``B_quote / (gamma * B_base * (1 - f))``. As f goes to zero this is the
    spot price.

    Raises:
        FOutOfRangeError: if f is not in [0, 1)
    """
    _ensure_constant_product(pool)
    f = _check_fraction(f, Direction.BUY_FROM_POOL)
    base, quote = pool.balances
    return quote / (pool.gamma * base * (1.0 - f))


def pool_value(pool: PoolState, price: Price) -> float:
    """Returns the value of a two-asset pool in units of its quote asset,
    valuing the base reserve at the given price.
    """
    base, quote = pool.balances
    return base * price + quote


def arbitrage_to_price(
    pool: PoolState, target: Price
) -> ArbitrageTrade:
    """Computes the arbitrage trade that levels a two-asset constant product
    pool to a reference price of its base asset (the first asset).

    With ``xi = target / (B_quote / B_base)`` the new reserves are
    ``B_base / sqrt(gamma * xi)`` and ``sqrt(gamma * xi) * B_quote``. The
    fee-adjusted spot price of the new state equals the target for every
    gamma; the product of the reserves is unchanged, so with gamma < 1 this
    is the fee-free leveling model and accrues no fees.

    Parameters:
        pool: the pool to level
        target: the reference price of the base asset in quote units

    Returns:
        the leveling trade; a null trade if the pool already quotes the
        target
    """
    _ensure_constant_product(pool)
    target = float(target)
    if not (target > 0 and isfinite(target)):
        raise ValueError(f"target price must be positive, got {target!r}")

    base_asset, quote_asset = pool.assets
    base, quote = pool.balances
    xi = target / (quote / base)
    scale = sqrt(pool.gamma * xi)
    spot_before = spot_price(pool, base_asset, quote_asset)

    if abs(scale - 1.0) <= NULL_TRADE_TOLERANCE:
        return ArbitrageTrade(
            xi=xi,
            input_asset=None,
            output_asset=None,
            input_amount=0.0,
            output_amount=0.0,
            spot_before=spot_before,
            spot_after=spot_before,
            new_state=pool,
        )

    new_base, new_quote = base / scale, quote * scale
    new_state = pool.with_balances({base_asset: new_base, quote_asset: new_quote})
    if new_quote > quote:
        input_asset, output_asset = quote_asset, base_asset
        input_amount, output_amount = new_quote - quote, base - new_base
    else:
        input_asset, output_asset = base_asset, quote_asset
        input_amount, output_amount = new_base - base, quote - new_quote

    return ArbitrageTrade(
        xi=xi,
        input_asset=input_asset,
        output_asset=output_asset,
        input_amount=input_amount,
        output_amount=output_amount,
        spot_before=spot_before,
        spot_after=spot_price(new_state, base_asset, quote_asset),
        new_state=new_state,
    )


def measured_price_impact(
    pool: PoolState, f: float, direction: DirectionLike
) -> float:
    """Measures the percentage change of the base asset's spot price by
    actually trading a fraction f of the base reserve against the pool.
    """
    direction = Direction.to_direction(direction)
    f = _check_fraction(f, direction)
    base_asset, quote_asset = pool.assets[0], pool.other_asset(pool.assets[0])
    before = spot_price(pool, base_asset, quote_asset)
    if f == 0:
        return 0.0

    amount = f * pool.balance_of(base_asset)
    if direction is Direction.BUY_FROM_POOL:
        paid = quote_input_for_exact_output(pool, base_asset, amount, quote_asset)
        after_state = swap(pool, quote_asset, paid, base_asset).new_state
    else:
        after_state = swap(pool, base_asset, amount, quote_asset).new_state

    after = spot_price(after_state, base_asset, quote_asset)
    return (after / before - 1.0) * 100.0


def measured_depth_loss(pool: PoolState, f: float, direction: DirectionLike) -> float:
    """Measures the output shortfall of a trade of fraction f of the base
    reserve against the pool, compared with a counterparty of unlimited
    depth quoting the pool's marginal price before the trade.

    When buying, the amount paid for ``f * B_base`` would have bought
    ``paid / spot`` base tokens from the deep counterparty; when selling,
    ``f * B_base`` base tokens would have fetched the marginal sale price
    ``gamma * B_quote / B_base`` each.

    The deep counterparty charges the pool's fee too. Buying gives
    `depth_loss(f)` for every gamma; selling gives `depth_loss(gamma * f)`
    since the curve only sees the effective input.
    """
    direction = Direction.to_direction(direction)
    f = _check_fraction(f, direction)
    if f == 0:
        return 0.0

    base_asset, quote_asset = pool.assets[0], pool.other_asset(pool.assets[0])
    spot = spot_price(pool, base_asset, quote_asset)
    amount = f * pool.balance_of(base_asset)

    if direction is Direction.BUY_FROM_POOL:
        paid = quote_input_for_exact_output(pool, base_asset, amount, quote_asset)
        actual, deep = amount, paid / spot
    else:
        base, quote = pool.balance_of(base_asset), pool.balance_of(quote_asset)
        actual = swap(pool, base_asset, amount, quote_asset).output_amount
        deep = amount * pool.gamma * quote / base

    return (deep - actual) / deep * 100.0


def measured_impermanent_loss(pool: PoolState, xi: float) -> float:
    """Measures impermanent loss by leveling the pool to ``xi`` times its
    reserve price and comparing the pool's value with the value of the
    original reserves, both at the new price.
    """
    xi = float(xi)
    if not (xi > 0 and isfinite(xi)):
        raise NonPositiveXiError(f"price ratio must be positive, got {xi!r}")
    _ensure_constant_product(pool)
    base, quote = pool.balances
    target = xi * quote / base
    leveled = arbitrage_to_price(pool, target).new_state
    held = pool_value(pool, target)
    return (pool_value(leveled, target) - held) / held * 100.0


def impact_curve(
    fs: Iterable[float], direction: DirectionLike
) -> List[PriceImpactReport]:
    """Evaluates `price_impact()` on a grid of reserve fractions."""
    direction = Direction.to_direction(direction)
    return [
        PriceImpactReport(f=float(f), direction=direction, pct_change=price_impact(f, direction))
        for f in fs
    ]


def il_curve(
    xis: Iterable[float], gamma: Union[float, FeeParam] = 1.0
) -> List[ImpermanentLossReport]:
    """Evaluates `impermanent_loss()` on a grid of price ratios."""
    fee = gamma if isinstance(gamma, FeeParam) else FeeParam(gamma)
    return [
        ImpermanentLossReport(xi=float(xi), gamma=fee, pct_loss=impermanent_loss(xi, fee))
        for xi in xis
    ]


def depth_curve(fs: Iterable[float], direction: DirectionLike) -> List[DepthLossReport]:
    """Evaluates `depth_loss()` on a grid of reserve fractions."""
    direction = Direction.to_direction(direction)
    return [
        DepthLossReport(f=float(f), direction=direction, pct_loss=depth_loss(f, direction))
        for f in fs
    ]
