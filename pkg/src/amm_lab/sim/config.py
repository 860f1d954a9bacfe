"""Configuration of simulation runs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from math import inf, isfinite
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from amm_lab.cfmm import spot_price
from amm_lab.errors import AMMError, ConfigInvalidError
from amm_lab.types import PoolKind, PoolState

from .processes import GBMProcess, PriceProcess, ReplayProcess

__all__ = ("LPEvent", "LPEventKind", "NoiseConfig", "SimConfig")


@dataclass(frozen=True)
class NoiseConfig:
    """Noise trader parameters. Each tick, ``trades_per_tick`` trades are
    made; each picks its direction with a fair coin and sells a fraction of
    the input reserve drawn uniformly from ``[min_fraction, max_fraction]``.
    """

    trades_per_tick: int = 0
    min_fraction: float = 0.001
    max_fraction: float = 0.01

    def __post_init__(self):
        if self.trades_per_tick < 0:
            raise ConfigInvalidError("noise trades_per_tick must be non-negative")
        if not 0 < self.min_fraction <= self.max_fraction < 1:
            raise ConfigInvalidError(
                "noise fractions must satisfy 0 < min_fraction <= max_fraction < 1"
            )

    @property
    def enabled(self) -> bool:
        return self.trades_per_tick > 0

    @classmethod
    def from_json(cls, obj: Optional[Dict[str, Any]]) -> "NoiseConfig":
        if obj is None:
            return cls()
        try:
            return cls(
                trades_per_tick=int(obj.get("trades_per_tick", 0)),
                min_fraction=float(obj.get("min_fraction", 0.001)),
                max_fraction=float(obj.get("max_fraction", 0.01)),
            )
        except (AttributeError, TypeError, ValueError) as ex:
            raise ConfigInvalidError(f"malformed noise section: {ex}") from None

    def to_json(self) -> Dict[str, Any]:
        return {
            "trades_per_tick": self.trades_per_tick,
            "min_fraction": self.min_fraction,
            "max_fraction": self.max_fraction,
        }


class LPEventKind(Enum):
    DEPOSIT = "deposit"
    WITHDRAW = "withdraw"


@dataclass(frozen=True)
class LPEvent:
    """A scheduled action of the outside liquidity provider.

    A deposit adds ``fraction`` times the current reserves; a withdrawal
    redeems ``fraction`` of the outside provider's shares.
    """

    tick: int
    kind: LPEventKind
    fraction: float

    def __post_init__(self):
        if self.tick < 1:
            raise ConfigInvalidError("LP events are scheduled from tick 1 onwards")
        upper = 1.0 if self.kind is LPEventKind.WITHDRAW else inf
        if not (0 < self.fraction <= upper and isfinite(self.fraction)):
            raise ConfigInvalidError(f"invalid LP event fraction: {self.fraction!r}")

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "LPEvent":
        try:
            return cls(
                tick=int(obj["tick"]),
                kind=LPEventKind(obj["kind"]),
                fraction=float(obj["fraction"]),
            )
        except (KeyError, TypeError, ValueError) as ex:
            raise ConfigInvalidError(f"malformed LP event: {ex}") from None

    def to_json(self) -> Dict[str, Any]:
        return {"tick": self.tick, "kind": self.kind.value, "fraction": self.fraction}


@dataclass(frozen=True)
class SimConfig:
    """Complete, validated description of a simulation run.

    The JSON form is the pool description (``kind``, ``fee_gamma``,
    ``reserves``) extended with ``price_process``, ``noise``, ``ticks``,
    ``seed`` and the optional ``lp_events`` list.
    """

    pool: PoolState
    price_process: PriceProcess
    ticks: int
    seed: int = 0
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    lp_events: Tuple[LPEvent, ...] = ()

    def __post_init__(self):
        pool = self.pool
        if pool.kind is not PoolKind.CONSTANT_PRODUCT:
            raise ConfigInvalidError("simulations need a constant product pool")
        if not pool.is_initialized:
            raise ConfigInvalidError("the simulated pool needs positive reserves")
        if self.ticks < 0:
            raise ConfigInvalidError(f"ticks must be non-negative, got {self.ticks!r}")

        process = self.price_process
        if isinstance(process, GBMProcess) and process.s0 is None:
            # fee-adjusted spot price; leveling to it is a null trade
            s0 = spot_price(pool, *pool.assets)
            object.__setattr__(self, "price_process", process.with_s0(s0))
        elif isinstance(process, ReplayProcess) and self.ticks > process.default_steps:
            raise ConfigInvalidError(
                f"the replayed series covers {process.default_steps} ticks, "
                f"{self.ticks} requested"
            )

        if any(event.tick > self.ticks for event in self.lp_events):
            raise ConfigInvalidError("an LP event is scheduled after the last tick")
        object.__setattr__(
            self, "lp_events", tuple(sorted(self.lp_events, key=lambda e: e.tick))
        )

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "SimConfig":
        """Loads a configuration from a JSON file. Relative paths inside the
        file are resolved against the directory of the file.

        Raises:
            FileNotFoundError: if the file does not exist
            ConfigInvalidError: if the file is not valid JSON or describes an
                invalid configuration
        """
        path = Path(path)
        with open(path, encoding="utf-8") as fp:
            try:
                obj = json.load(fp)
            except ValueError as ex:
                raise ConfigInvalidError(f"{path}: {ex}") from None
        return cls.from_json(obj, base_dir=path.parent)

    @classmethod
    def from_json(
        cls, obj: Dict[str, Any], base_dir: Optional[Path] = None
    ) -> "SimConfig":
        """Constructs a configuration from its JSON object representation.

        Raises:
            ConfigInvalidError: if the object describes an invalid
                configuration
        """
        if not isinstance(obj, dict):
            raise ConfigInvalidError("configuration must be a JSON object")
        try:
            pool = PoolState.from_json(obj)
        except AMMError as ex:
            raise ConfigInvalidError(str(ex)) from ex

        process = PriceProcess.from_json(obj.get("price_process"), base_dir)
        ticks = obj.get("ticks", process.default_steps)
        if ticks is None:
            raise ConfigInvalidError("the number of ticks is not given")

        try:
            return cls(
                pool=pool,
                price_process=process,
                ticks=int(ticks),
                seed=int(obj.get("seed", 0)),
                noise=NoiseConfig.from_json(obj.get("noise")),
                lp_events=tuple(
                    LPEvent.from_json(item) for item in obj.get("lp_events", ())
                ),
            )
        except (TypeError, ValueError) as ex:
            raise ConfigInvalidError(f"malformed configuration: {ex}") from None

    def to_json(self) -> Dict[str, Any]:
        result = self.pool.to_json()
        result.update(
            price_process=self.price_process.to_json(),
            noise=self.noise.to_json(),
            ticks=self.ticks,
            seed=self.seed,
            lp_events=[event.to_json() for event in self.lp_events],
        )
        return result

    def with_seed(self, seed: int) -> "SimConfig":
        return replace(self, seed=int(seed))

    def with_sigma(self, sigma: float) -> "SimConfig":
        """Returns a copy of the configuration whose GBM process uses the
        given volatility.

        Raises:
            ConfigInvalidError: if the price process is not a GBM
        """
        if not isinstance(self.price_process, GBMProcess):
            raise ConfigInvalidError("volatility can only be swept for gbm processes")
        return replace(self, price_process=self.price_process.with_sigma(sigma))
