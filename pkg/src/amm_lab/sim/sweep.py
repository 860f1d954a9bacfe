"""Monte-Carlo sweep of terminal impermanent loss against the volatility of
the reference price.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial
from math import fsum
from typing import Any, Dict, List, Optional, Sequence, Union

from anyio import CapacityLimiter, run

from amm_lab.utils.concurrency import gather_in_threads

from .config import SimConfig
from .runner import run_simulation

__all__ = ("SweepRow", "run_volatility_sweep", "volatility_sweep")


@dataclass(frozen=True)
class SweepRow:
    """One row of a volatility sweep table."""

    sigma: float
    runs: int
    mean_abs_il_pct: float

    def to_json(self) -> Dict[str, Any]:
        return {
            "sigma": self.sigma,
            "runs": self.runs,
            "mean_abs_il_pct": self.mean_abs_il_pct,
        }


def _terminal_abs_il(config: SimConfig) -> float:
    return abs(run_simulation(config).final_il_pct)


def _validate_sigmas(sigmas: Sequence[float]) -> List[float]:
    result = [float(sigma) for sigma in sigmas]
    if any(sigma < 0 for sigma in result):
        raise ValueError("volatilities must be non-negative")
    if result != sorted(result):
        raise ValueError("volatilities must be sorted in increasing order")
    return result


async def volatility_sweep(
    base: SimConfig,
    sigmas: Sequence[float],
    runs_per_sigma: int,
    *,
    limiter: Optional[Union[CapacityLimiter, int]] = None,
) -> List[SweepRow]:
    """Runs ``runs_per_sigma`` independent simulations for every volatility
    and returns the mean absolute terminal impermanent loss of each.

    Run ``r`` of every volatility uses the seed ``base.seed + r``, so the
    volatilities are compared on common random numbers. Runs are executed in
    worker threads and share no state; the table does not depend on the
    order in which they finish.

    Parameters:
        base: the configuration to vary; its price process must be a GBM
        sigmas: the volatilities to sweep, non-negative and sorted
        runs_per_sigma: number of runs per volatility
        limiter: optional capacity limiter or maximum number of runs that
            may execute at the same time

    Raises:
        ValueError: if the volatilities are negative or unsorted, or the
            number of runs is not positive
        ConfigInvalidError: if the price process of the base configuration
            is not a GBM
    """
    sigmas = _validate_sigmas(sigmas)
    if runs_per_sigma < 1:
        raise ValueError("at least one run per volatility is needed")

    configs = [
        base.with_sigma(sigma).with_seed(base.seed + run_index)
        for sigma in sigmas
        for run_index in range(runs_per_sigma)
    ]
    losses = await gather_in_threads(
        [partial(_terminal_abs_il, config) for config in configs], limiter
    )

    rows = []
    for index, sigma in enumerate(sigmas):
        chunk = losses[index * runs_per_sigma : (index + 1) * runs_per_sigma]
        rows.append(
            SweepRow(
                sigma=sigma,
                runs=runs_per_sigma,
                mean_abs_il_pct=fsum(chunk) / runs_per_sigma,
            )
        )
    return rows


def run_volatility_sweep(
    base: SimConfig,
    sigmas: Sequence[float],
    runs_per_sigma: int,
    *,
    jobs: Optional[int] = None,
    backend: str = "asyncio",
) -> List[SweepRow]:
    """Synchronous variant of `volatility_sweep()` that runs its own event
    loop; ``jobs`` limits the number of concurrent runs.
    """
    return run(
        partial(volatility_sweep, base, sigmas, runs_per_sigma, limiter=jobs),
        backend=backend,
    )
