"""Reference price processes that drive the simulated arbitrageur.

Random draws come from a ``numpy.random.Generator`` backed by the PCG64 bit
generator; the caller owns the generator so that a run is reproducible from
its seed alone.
"""

from __future__ import annotations

import csv
from abc import ABCMeta, abstractmethod
from dataclasses import dataclass
from math import isfinite
from pathlib import Path
from typing import Any, ClassVar, Dict, Optional, Tuple, Union

import numpy as np

from amm_lab.errors import ConfigInvalidError
from amm_lab.utils.registry import Registry

__all__ = (
    "GBMProcess",
    "PriceProcess",
    "PriceProcessRegistry",
    "ReplayProcess",
)


#: Mapping that maps price process kinds to their classes
PriceProcessRegistry: Registry[str, type] = Registry("price process")


class PriceProcess(metaclass=ABCMeta):
    """Interface specification for reference price processes."""

    kind: ClassVar[str]

    @classmethod
    def from_json(
        cls, obj: Dict[str, Any], base_dir: Optional[Path] = None
    ) -> "PriceProcess":
        """Constructs a price process from its JSON object representation,
        dispatching on its ``kind`` key.

        Parameters:
            obj: the JSON object
            base_dir: directory against which relative file names in the
                object are resolved

        Raises:
            ConfigInvalidError: if the kind is unknown or the object is
                malformed
        """
        if not isinstance(obj, dict):
            raise ConfigInvalidError("price_process must be an object")
        try:
            factory = PriceProcessRegistry.find(obj.get("kind", ""))
        except KeyError:
            raise ConfigInvalidError(
                f"no such price process: {obj.get('kind')!r}"
            ) from None
        return factory._from_json(obj, base_dir)

    @classmethod
    @abstractmethod
    def _from_json(cls, obj: Dict[str, Any], base_dir: Optional[Path]):
        raise NotImplementedError

    @property
    def default_steps(self) -> Optional[int]:
        """Number of steps the process provides when the configuration does
        not say how many ticks to run; `None` if it cannot tell.
        """
        return None

    @abstractmethod
    def path(self, steps: int, rng: np.random.Generator) -> np.ndarray:
        """Generates the reference prices for ``steps`` ticks.

        Returns:
            an array of ``steps + 1`` strictly positive prices, the first one
            being the price at tick zero
        """
        raise NotImplementedError

    @abstractmethod
    def to_json(self) -> Dict[str, Any]:
        raise NotImplementedError


def _register(kind: str):
    def decorator(cls):
        cls.kind = kind
        return PriceProcessRegistry.register(kind, cls)

    return decorator


@_register("gbm")
@dataclass(frozen=True)
class GBMProcess(PriceProcess):
    """Geometric Brownian motion with per-step drift and volatility:
    ``s[t + 1] = s[t] * exp((mu - sigma ** 2 / 2) + sigma * z[t])`` where the
    ``z[t]`` are standard normal draws.

    ``s0`` may be left unset, in which case the simulator starts the process
    from the fee-adjusted spot price of the pool.
    """

    s0: Optional[float] = None
    mu: float = 0.0
    sigma: float = 0.0
    steps: Optional[int] = None

    def __post_init__(self):
        if self.s0 is not None and not (isfinite(self.s0) and self.s0 > 0):
            raise ConfigInvalidError(f"gbm s0 must be positive, got {self.s0!r}")
        if not isfinite(self.mu):
            raise ConfigInvalidError(f"gbm mu must be finite, got {self.mu!r}")
        if not (isfinite(self.sigma) and self.sigma >= 0):
            raise ConfigInvalidError(
                f"gbm sigma must be non-negative, got {self.sigma!r}"
            )
        if self.steps is not None and self.steps < 0:
            raise ConfigInvalidError(f"gbm steps must be non-negative, got {self.steps!r}")

    @classmethod
    def _from_json(cls, obj: Dict[str, Any], base_dir: Optional[Path]):
        try:
            return cls(
                s0=float(obj["s0"]) if obj.get("s0") is not None else None,
                mu=float(obj.get("mu", 0.0)),
                sigma=float(obj.get("sigma", 0.0)),
                steps=int(obj["steps"]) if obj.get("steps") is not None else None,
            )
        except (TypeError, ValueError) as ex:
            raise ConfigInvalidError(f"malformed gbm process: {ex}") from None

    @property
    def default_steps(self) -> Optional[int]:
        return self.steps

    def path(self, steps: int, rng: np.random.Generator) -> np.ndarray:
        if self.s0 is None:
            raise ConfigInvalidError("gbm s0 is not set")
        z = rng.standard_normal(steps)
        growth = np.exp((self.mu - self.sigma**2 / 2) + self.sigma * z)
        return np.cumprod(np.concatenate(([self.s0], growth)))

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "s0": self.s0,
            "mu": self.mu,
            "sigma": self.sigma,
            "steps": self.steps,
        }

    def with_s0(self, s0: float) -> "GBMProcess":
        return GBMProcess(s0=s0, mu=self.mu, sigma=self.sigma, steps=self.steps)

    def with_sigma(self, sigma: float) -> "GBMProcess":
        return GBMProcess(s0=self.s0, mu=self.mu, sigma=sigma, steps=self.steps)


@_register("csv_replay")
@dataclass(frozen=True)
class ReplayProcess(PriceProcess):
    """Replays a fixed series of reference prices, typically read from a CSV
    file with a ``price`` column (or a single unnamed column).
    """

    series: Tuple[float, ...]
    source: Optional[str] = None

    def __post_init__(self):
        series = tuple(float(p) for p in self.series)
        if not series:
            raise ConfigInvalidError("replayed price series is empty")
        if any(not (isfinite(p) and p > 0) for p in series):
            raise ConfigInvalidError("replayed prices must be strictly positive")
        object.__setattr__(self, "series", series)

    @classmethod
    def _from_json(cls, obj: Dict[str, Any], base_dir: Optional[Path]):
        if "series" in obj:
            try:
                return cls(series=tuple(obj["series"]))
            except (TypeError, ValueError) as ex:
                raise ConfigInvalidError(f"malformed price series: {ex}") from None

        if "path" not in obj:
            raise ConfigInvalidError("csv_replay needs either 'path' or 'series'")
        path = Path(obj["path"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return cls(series=read_price_csv(path), source=str(obj["path"]))

    @property
    def default_steps(self) -> Optional[int]:
        return len(self.series) - 1

    def path(self, steps: int, rng: np.random.Generator) -> np.ndarray:
        if steps + 1 > len(self.series):
            raise ConfigInvalidError(
                f"replay holds {len(self.series) - 1} steps, {steps} requested"
            )
        return np.array(self.series[: steps + 1], dtype=float)

    def to_json(self) -> Dict[str, Any]:
        if self.source is not None:
            return {"kind": self.kind, "path": self.source}
        return {"kind": self.kind, "series": list(self.series)}


def read_price_csv(path: Union[str, Path]) -> Tuple[float, ...]:
    """Reads a price series from a CSV file.

    The file either has a header with a ``price`` column, or holds one
    price per line without a header.

    Raises:
        ConfigInvalidError: if the file cannot be read or parsed
    """
    try:
        with open(path, newline="") as fp:
            rows = [row for row in csv.reader(fp) if row]
    except OSError as ex:
        raise ConfigInvalidError(f"cannot read price series: {ex}") from None

    if not rows:
        raise ConfigInvalidError(f"price series {str(path)!r} is empty")

    column = 0
    header = [cell.strip().lower() for cell in rows[0]]
    if "price" in header:
        column = header.index("price")
        rows = rows[1:]

    try:
        return tuple(float(row[column]) for row in rows)
    except (IndexError, ValueError) as ex:
        raise ConfigInvalidError(f"malformed price series: {ex}") from None
