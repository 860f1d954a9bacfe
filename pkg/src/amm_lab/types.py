"""Shared value types of the laboratory: amounts, prices, fee parameters,
pool descriptors and swap quotes.

All types are immutable; operations that change a pool return a new state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import isfinite
from typing import Any, Dict, Mapping, Optional, Tuple, Union

from amm_lab.errors import InvalidPoolError, NonPositiveInputError, UnknownAssetError
from amm_lab.utils.numeric import sums_to_one

__all__ = (
    "Amount",
    "AssetId",
    "FeeParam",
    "PoolKind",
    "PoolState",
    "Price",
    "Side",
    "SideLike",
    "SwapQuote",
    "TokenSwapState",
    "check_input_amount",
)


#: Type alias for asset identifiers; opaque strings
AssetId = str

#: Type alias for non-negative, finite token amounts
Amount = float

#: Type alias for positive, finite prices (quote token per base token)
Price = float

#: Maximum number of assets in a constant mean pool
MAX_MEAN_ASSETS = 8


def check_input_amount(amount: float, *, allow_zero: bool = False) -> float:
    """Validates an amount passed into a trade or conversion.

    Parameters:
        amount: the amount to validate
        allow_zero: whether zero is an admissible (null) amount

    Returns:
        the amount as a float

    Raises:
        NonPositiveInputError: if the amount is negative, not finite, or zero
            when zero is not allowed
    """
    amount = float(amount)
    if not isfinite(amount) or amount < 0 or (amount == 0 and not allow_zero):
        raise NonPositiveInputError(amount)
    return amount


def _check_reserve(value: float, what: str, *, allow_zero: bool = True) -> float:
    value = float(value)
    if not isfinite(value) or value < 0 or (value == 0 and not allow_zero):
        raise InvalidPoolError(f"{what} must be a finite positive amount, got {value!r}")
    return value


@dataclass(frozen=True)
class FeeParam:
    """Fee parameter of a pool. ``gamma`` is the fraction of the incoming
    amount that enters the curve; the fee fraction is ``1 - gamma``.
    """

    gamma: float = 1.0

    def __post_init__(self):
        gamma = float(self.gamma)
        if not isfinite(gamma) or not 0 < gamma <= 1:
            raise InvalidPoolError(f"fee gamma must be in (0, 1], got {gamma!r}")
        object.__setattr__(self, "gamma", gamma)

    @property
    def fraction(self) -> float:
        """Returns the fee fraction deducted from the incoming leg."""
        return 1.0 - self.gamma

    def effective(self, amount: float) -> float:
        """Returns the part of an incoming amount that enters the curve."""
        return self.gamma * amount

    def fee_on(self, amount: float) -> float:
        """Returns the fee taken from an incoming amount."""
        return (1.0 - self.gamma) * amount


class PoolKind(Enum):
    """Enum describing the constant-function families supported by the
    swap engine.
    """

    CONSTANT_PRODUCT = "constant_product"
    CONSTANT_SUM = "constant_sum"
    CONSTANT_MEAN = "constant_mean"


@dataclass(frozen=True)
class PoolState:
    """State of a constant-function pool.

    Balances may all be zero for a pool that has not received liquidity yet;
    pricing and swapping require every reserve to be positive.
    """

    kind: PoolKind
    assets: Tuple[AssetId, ...]
    balances: Tuple[Amount, ...]
    weights: Tuple[float, ...] = ()
    fee: FeeParam = field(default_factory=FeeParam)

    def __post_init__(self):
        kind = PoolKind(self.kind)
        assets = tuple(str(asset) for asset in self.assets)
        balances = tuple(
            _check_reserve(value, f"reserve of {asset!r}")
            for asset, value in zip(assets, self.balances)
        )
        weights = tuple(float(w) for w in self.weights) or tuple(
            1.0 / len(assets) for _ in assets
        )

        if len(assets) < 2:
            raise InvalidPoolError("a pool needs at least two assets")
        if len(set(assets)) != len(assets):
            raise InvalidPoolError(f"duplicate asset identifiers in {assets!r}")
        if len(balances) != len(assets) or len(weights) != len(assets):
            raise InvalidPoolError("assets, balances and weights differ in length")
        if any(not isfinite(w) or w <= 0 for w in weights):
            raise InvalidPoolError(f"weights must be positive, got {weights!r}")
        if not sums_to_one(weights):
            raise InvalidPoolError(f"weights must sum to 1, got {sum(weights)!r}")

        if kind is PoolKind.CONSTANT_PRODUCT:
            if len(assets) != 2 or weights != (0.5, 0.5):
                raise InvalidPoolError(
                    "constant product pools have exactly two equally weighted assets"
                )
        elif kind is PoolKind.CONSTANT_MEAN and len(assets) > MAX_MEAN_ASSETS:
            raise InvalidPoolError(
                f"constant mean pools hold at most {MAX_MEAN_ASSETS} assets"
            )

        zeros = sum(1 for value in balances if value == 0)
        if 0 < zeros < len(balances):
            raise InvalidPoolError("either all or none of the reserves may be empty")

        fee = self.fee if isinstance(self.fee, FeeParam) else FeeParam(self.fee)

        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "assets", assets)
        object.__setattr__(self, "balances", balances)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "fee", fee)

    @classmethod
    def create(
        cls,
        kind: Union[PoolKind, str],
        reserves: Mapping[AssetId, float],
        gamma: float = 1.0,
        weights: Optional[Mapping[AssetId, float]] = None,
    ) -> "PoolState":
        """Convenience constructor from a mapping of asset ids to reserves.

        Parameters:
            kind: the pool family
            reserves: mapping from asset identifiers to reserves, in the
                order in which the assets should appear in the pool
            gamma: the fee parameter
            weights: optional mapping from asset identifiers to weights;
                equal weights are used when omitted
        """
        assets = tuple(reserves)
        return cls(
            kind=PoolKind(kind),
            assets=assets,
            balances=tuple(reserves[asset] for asset in assets),
            weights=tuple(weights[asset] for asset in assets) if weights else (),
            fee=FeeParam(gamma),
        )

    @classmethod
    def constant_product(
        cls, reserves: Mapping[AssetId, float], gamma: float = 1.0
    ) -> "PoolState":
        """Shorthand for a two-asset constant product pool."""
        return cls.create(PoolKind.CONSTANT_PRODUCT, reserves, gamma)

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "PoolState":
        """Constructs a pool from its JSON object representation, i.e.
        ``{"kind": ..., "fee_gamma": ..., "reserves": [{"asset": ...,
        "amount": ..., "weight": ...}, ...]}``.

        Raises:
            InvalidPoolError: if the object is malformed
        """
        try:
            kind = PoolKind(obj["kind"])
            reserves = list(obj["reserves"])
            assets = tuple(str(item["asset"]) for item in reserves)
            balances = tuple(float(item["amount"]) for item in reserves)
            if any("weight" in item for item in reserves):
                weights = tuple(float(item["weight"]) for item in reserves)
            else:
                weights = ()
            gamma = float(obj.get("fee_gamma", 1.0))
        except (KeyError, TypeError, ValueError) as ex:
            raise InvalidPoolError(f"malformed pool description: {ex}") from None

        return cls(
            kind=kind,
            assets=assets,
            balances=balances,
            weights=weights,
            fee=FeeParam(gamma),
        )

    def to_json(self) -> Dict[str, Any]:
        """Converts the pool into an object that can be written directly into
        a JSON file.
        """
        return {
            "kind": self.kind.value,
            "fee_gamma": self.fee.gamma,
            "reserves": [
                {"asset": asset, "amount": amount, "weight": weight}
                for asset, amount, weight in zip(
                    self.assets, self.balances, self.weights
                )
            ],
        }

    @property
    def gamma(self) -> float:
        return self.fee.gamma

    @property
    def is_initialized(self) -> bool:
        """Returns whether every reserve of the pool is positive."""
        return all(value > 0 for value in self.balances)

    @property
    def reserves(self) -> Dict[AssetId, Amount]:
        """Returns a mapping from asset identifiers to reserves."""
        return dict(zip(self.assets, self.balances))

    def balance_of(self, asset: AssetId) -> Amount:
        return self.balances[self.index_of(asset)]

    def index_of(self, asset: AssetId) -> int:
        """Returns the position of the given asset in the pool.

        Raises:
            UnknownAssetError: if the asset is not part of the pool
        """
        try:
            return self.assets.index(asset)
        except ValueError:
            raise UnknownAssetError(asset) from None

    def other_asset(self, asset: AssetId) -> AssetId:
        """Returns the counterpart of the given asset in a two-asset pool.

        Raises:
            UnknownAssetError: if the asset is not part of the pool
            InvalidPoolError: if the pool has more than two assets, in which
                case the counterpart must be named explicitly
        """
        index = self.index_of(asset)
        if len(self.assets) != 2:
            raise InvalidPoolError(
                "the counterpart asset must be given for pools with more than two assets"
            )
        return self.assets[1 - index]

    def weight_of(self, asset: AssetId) -> float:
        return self.weights[self.index_of(asset)]

    def with_balances(self, updates: Mapping[AssetId, float]) -> "PoolState":
        """Returns a copy of the pool where the reserves of the given assets
        are replaced with new values.
        """
        balances = list(self.balances)
        for asset, value in updates.items():
            balances[self.index_of(asset)] = value
        return PoolState(
            kind=self.kind,
            assets=self.assets,
            balances=tuple(balances),
            weights=self.weights,
            fee=self.fee,
        )


class Side(Enum):
    """The two reserves of a token swap state."""

    A = "a"
    B = "b"

    @property
    def other(self) -> "Side":
        return Side.B if self is Side.A else Side.A


#: Type specification for objects that can be converted into a side
SideLike = Union[str, Side]


@dataclass(frozen=True)
class TokenSwapState:
    """State of a token swap market maker: two reserves backing a supply of
    intermediary tokens with fixed reserve ratios.
    """

    reserve_a: Amount
    reserve_b: Amount
    supply: float
    rr_a: float
    rr_b: Optional[float] = None
    asset_a: AssetId = "a"
    asset_b: AssetId = "b"

    def __post_init__(self):
        reserve_a = _check_reserve(self.reserve_a, "reserve a", allow_zero=False)
        reserve_b = _check_reserve(self.reserve_b, "reserve b", allow_zero=False)
        supply = _check_reserve(self.supply, "supply", allow_zero=False)
        rr_a = float(self.rr_a)
        rr_b = 1.0 - rr_a if self.rr_b is None else float(self.rr_b)

        for name, value in (("rr_a", rr_a), ("rr_b", rr_b)):
            if not isfinite(value) or not 0 < value < 1:
                raise InvalidPoolError(f"{name} must be in (0, 1), got {value!r}")
        if not sums_to_one((rr_a, rr_b)):
            raise InvalidPoolError(
                f"reserve ratios must sum to 1, got {rr_a!r} + {rr_b!r}"
            )
        if self.asset_a == self.asset_b:
            raise InvalidPoolError("the two reserves need distinct asset identifiers")

        object.__setattr__(self, "reserve_a", reserve_a)
        object.__setattr__(self, "reserve_b", reserve_b)
        object.__setattr__(self, "supply", supply)
        object.__setattr__(self, "rr_a", rr_a)
        object.__setattr__(self, "rr_b", rr_b)

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "TokenSwapState":
        """Constructs a token swap state from its JSON object representation,
        i.e. ``{"reserve_a": ..., "reserve_b": ..., "supply": ...,
        "rr_a": ...}``.

        Raises:
            InvalidPoolError: if the object is malformed
        """
        try:
            return cls(
                reserve_a=float(obj["reserve_a"]),
                reserve_b=float(obj["reserve_b"]),
                supply=float(obj["supply"]),
                rr_a=float(obj["rr_a"]),
                rr_b=float(obj["rr_b"]) if "rr_b" in obj else None,
                asset_a=str(obj.get("asset_a", "a")),
                asset_b=str(obj.get("asset_b", "b")),
            )
        except (KeyError, TypeError, ValueError) as ex:
            raise InvalidPoolError(f"malformed token swap description: {ex}") from None

    def to_json(self) -> Dict[str, Any]:
        return {
            "reserve_a": self.reserve_a,
            "reserve_b": self.reserve_b,
            "supply": self.supply,
            "rr_a": self.rr_a,
            "rr_b": self.rr_b,
            "asset_a": self.asset_a,
            "asset_b": self.asset_b,
        }

    def asset(self, side: SideLike) -> AssetId:
        return self.asset_a if Side(side) is Side.A else self.asset_b

    def reserve(self, side: SideLike) -> Amount:
        return self.reserve_a if Side(side) is Side.A else self.reserve_b

    def rr(self, side: SideLike) -> float:
        return self.rr_a if Side(side) is Side.A else self.rr_b  # type: ignore

    def side_of(self, asset: AssetId) -> Side:
        """Returns the side holding the given asset; the side names ``a`` and
        ``b`` themselves are accepted too.

        Raises:
            UnknownAssetError: if the asset is not held by either side
        """
        if asset == self.asset_a:
            return Side.A
        if asset == self.asset_b:
            return Side.B
        try:
            return Side(asset)
        except ValueError:
            raise UnknownAssetError(asset) from None

    def updated(
        self, side: SideLike, reserve: float, supply: float
    ) -> "TokenSwapState":
        """Returns a copy of the state with a new reserve on the given side
        and a new intermediary token supply.
        """
        if Side(side) is Side.A:
            reserve_a, reserve_b = reserve, self.reserve_b
        else:
            reserve_a, reserve_b = self.reserve_a, reserve
        return TokenSwapState(
            reserve_a=reserve_a,
            reserve_b=reserve_b,
            supply=supply,
            rr_a=self.rr_a,
            rr_b=self.rr_b,
            asset_a=self.asset_a,
            asset_b=self.asset_b,
        )


@dataclass(frozen=True)
class SwapQuote:
    """Result of a swap: amounts exchanged, the fee taken from the input leg,
    the price of the output asset (in input units) before and after the
    trade, and the new state of the market maker.
    """

    input_asset: AssetId
    output_asset: AssetId
    input_amount: Amount
    output_amount: Amount
    fee_paid: Amount
    spot_before: Price
    spot_after: Price
    new_state: Union[PoolState, TokenSwapState]

    @property
    def average_price(self) -> Price:
        """Average price paid per unit of the output asset, in input units."""
        if self.output_amount == 0:
            return self.spot_before
        return self.input_amount / self.output_amount

    @property
    def price_impact_pct(self) -> float:
        """Relative change of the spot price caused by the trade, in percent."""
        return (self.spot_after / self.spot_before - 1.0) * 100.0

    @property
    def slippage_pct(self) -> float:
        """Relative gap between the average execution price and the spot
        price before the trade, in percent.
        """
        return (self.average_price / self.spot_before - 1.0) * 100.0

    def to_json(self) -> Dict[str, Any]:
        return {
            "input_asset": self.input_asset,
            "output_asset": self.output_asset,
            "input_amount": self.input_amount,
            "output_amount": self.output_amount,
            "fee_paid": self.fee_paid,
            "spot_before": self.spot_before,
            "spot_after": self.spot_after,
            "average_price": self.average_price,
            "price_impact_pct": self.price_impact_pct,
            "slippage_pct": self.slippage_pct,
            "new_state": self.new_state.to_json(),
        }
