"""Deterministic agent-based simulation of a constant product pool.

Each tick the reference price advances, an arbitrageur levels the pool to
it, noise traders trade against the pool, scheduled liquidity events of an
outside provider are applied, and the position of the tracked liquidity
provider is marked against simply holding its initial deposit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from amm_lab.analytics import arbitrage_to_price, pool_value
from amm_lab.cfmm import invariant_value, swap
from amm_lab.errors import ConfigInvalidError
from amm_lab.types import PoolState

from .config import LPEventKind, SimConfig
from .events import EventLog, EventObserver, SimEvent, SimEventKind
from .ledger import POOL, Ledger
from .liquidity import LPPosition, deposit, withdraw

__all__ = ("MarkRecord", "SimRun", "create_generators", "run_simulation")


#: Agent account names
ARBITRAGEUR = "arbitrageur"
NOISE_TRADER = "noise"
LP = "lp"
OUTSIDE_LP = "outside_lp"


@dataclass(frozen=True)
class MarkRecord:
    """Mark of the tracked liquidity position at the end of a tick."""

    tick: int
    ref_price: float
    pool_value: float
    hold_value: float
    il_pct: float
    fees_cum: float
    k: float
    #: Largest gap between the books and the pool reserves, or between the
    #: total of any asset and its endowment
    book_gap: float = 0.0

    def to_json(self) -> Dict[str, Any]:
        return {
            "tick": self.tick,
            "ref_price": self.ref_price,
            "pool_value": self.pool_value,
            "hold_value": self.hold_value,
            "il_pct": self.il_pct,
            "fees_cum": self.fees_cum,
            "k": self.k,
            "book_gap": self.book_gap,
        }


@dataclass
class SimRun:
    """Outcome of a simulation run: the configuration it was run with, the
    event log, per-tick marks and the final books.
    """

    config: SimConfig
    events: List[SimEvent]
    marks: List[MarkRecord]
    final_state: PoolState
    position: LPPosition
    total_shares: float
    ledger: Ledger

    @property
    def fees_accrued(self) -> float:
        """Total fees paid into the pool, in quote units at the reference
        price of the tick they were paid in.
        """
        return self.marks[-1].fees_cum

    @property
    def final_il_pct(self) -> float:
        return self.marks[-1].il_pct

    def summary(self) -> Dict[str, Any]:
        return {
            "ticks": self.config.ticks,
            "seed": self.config.seed,
            "price_model": self.config.price_process.kind,
            "final_il_pct": self.final_il_pct,
            "fees_accrued": self.fees_accrued,
            "final_k": self.marks[-1].k,
            "balance_residuals": self.ledger.residuals(),
            "max_book_gap": max(mark.book_gap for mark in self.marks),
        }

    def summary_rows(self) -> List[Dict[str, Any]]:
        return [mark.to_json() for mark in self.marks]


def create_generators(seed: int):
    """Returns the two independent random generators of a run: the first
    drives the reference price, the second the noise traders. Both are PCG64
    generators spawned from ``numpy.random.SeedSequence(seed)``.
    """
    price_seq, noise_seq = np.random.SeedSequence(seed).spawn(2)
    return (
        np.random.Generator(np.random.PCG64(price_seq)),
        np.random.Generator(np.random.PCG64(noise_seq)),
    )


class _Simulation:
    """Mutable state of a single run; not shared between runs."""

    def __init__(self, config: SimConfig, observer: Optional[EventObserver]):
        self.config = config
        self.log = EventLog(observer)
        self.ledger = Ledger()
        self.marks: List[MarkRecord] = []
        self.fees_cum = 0.0

        self.pool = config.pool.with_balances({a: 0.0 for a in config.pool.assets})
        self.total_shares = 0.0
        self.outside_shares = 0.0
        self.position: LPPosition

        self.base, self.quote = config.pool.assets

    def _move(self, source: str, target: str, asset: str, amount: float) -> None:
        self.ledger.transfer(source, target, asset, amount)

    def open_position(self, tick: int, ref_price: float) -> None:
        amounts = self.config.pool.reserves
        for asset, amount in amounts.items():
            self.ledger.endow(LP, asset, amount)
            self._move(LP, POOL, asset, amount)

        shares, self.pool = deposit(self.pool, amounts, self.total_shares)
        self.total_shares += shares
        base, quote = self.pool.balances
        self.position = LPPosition(
            shares=shares,
            entry_reserves=(base, quote),
            entry_price=quote / base,
        )
        self.log.append(
            tick,
            SimEventKind.LP_DEPOSIT,
            account=LP,
            shares=shares,
            amounts=amounts,
        )

    def arbitrage(self, tick: int, ref_price: float) -> None:
        trade = arbitrage_to_price(self.pool, ref_price)
        if trade.is_null:
            return

        self._move(ARBITRAGEUR, POOL, trade.input_asset, trade.input_amount)
        self._move(POOL, ARBITRAGEUR, trade.output_asset, trade.output_amount)
        self.pool = trade.new_state
        self.log.append(
            tick,
            SimEventKind.ARB,
            xi=trade.xi,
            input_asset=trade.input_asset,
            input_amount=trade.input_amount,
            output_asset=trade.output_asset,
            output_amount=trade.output_amount,
            spot_after=trade.spot_after,
        )

    def noise_trades(self, tick: int, ref_price: float, rng: np.random.Generator) -> None:
        noise = self.config.noise
        for _ in range(noise.trades_per_tick):
            sell_base = bool(rng.integers(2))
            fraction = float(rng.uniform(noise.min_fraction, noise.max_fraction))
            input_asset = self.base if sell_base else self.quote
            amount = fraction * self.pool.balance_of(input_asset)

            quote = swap(self.pool, input_asset, amount)
            self._move(NOISE_TRADER, POOL, quote.input_asset, quote.input_amount)
            self._move(POOL, NOISE_TRADER, quote.output_asset, quote.output_amount)
            self.pool = quote.new_state  # type: ignore

            fee_value = quote.fee_paid * (ref_price if sell_base else 1.0)
            self.fees_cum += fee_value
            self.log.append(
                tick,
                SimEventKind.TRADE,
                input_asset=quote.input_asset,
                input_amount=quote.input_amount,
                output_asset=quote.output_asset,
                output_amount=quote.output_amount,
                fee_paid=quote.fee_paid,
            )

    def liquidity_events(self, tick: int) -> None:
        for event in self.config.lp_events:
            if event.tick != tick:
                continue

            if event.kind is LPEventKind.DEPOSIT:
                amounts = {
                    asset: balance * event.fraction
                    for asset, balance in self.pool.reserves.items()
                }
                for asset, amount in amounts.items():
                    self.ledger.endow(OUTSIDE_LP, asset, amount)
                    self._move(OUTSIDE_LP, POOL, asset, amount)
                shares, self.pool = deposit(self.pool, amounts, self.total_shares)
                self.total_shares += shares
                self.outside_shares += shares
                kind = SimEventKind.LP_DEPOSIT
            else:
                if self.outside_shares <= 0:
                    raise ConfigInvalidError(
                        f"the outside provider holds no shares at tick {tick}"
                    )
                shares = self.outside_shares * event.fraction
                amounts, self.pool = withdraw(self.pool, shares, self.total_shares)
                for asset, amount in amounts.items():
                    self._move(POOL, OUTSIDE_LP, asset, amount)
                self.total_shares -= shares
                self.outside_shares -= shares
                kind = SimEventKind.LP_WITHDRAW

            self.log.append(
                tick, kind, account=OUTSIDE_LP, shares=shares, amounts=amounts
            )

    def book_gap(self) -> float:
        book = self.ledger.balances(POOL)
        gaps = [
            abs(book.get(asset, 0.0) - balance)
            for asset, balance in self.pool.reserves.items()
        ]
        gaps.extend(abs(value) for value in self.ledger.residuals().values())
        return max(gaps)

    def mark(self, tick: int, ref_price: float) -> None:
        share = self.position.shares / self.total_shares
        value = share * pool_value(self.pool, ref_price)
        hold = self.position.hold_value(ref_price)
        record = MarkRecord(
            tick=tick,
            ref_price=ref_price,
            pool_value=value,
            hold_value=hold,
            il_pct=(value - hold) / hold * 100.0,
            fees_cum=self.fees_cum,
            k=invariant_value(self.pool),
            book_gap=self.book_gap(),
        )
        self.marks.append(record)
        payload = record.to_json()
        del payload["tick"]
        self.log.append(tick, SimEventKind.MARK, **payload)


def run_simulation(
    config: SimConfig, observer: Optional[EventObserver] = None
) -> SimRun:
    """Runs a simulation.

    Tick zero opens the tracked liquidity position with the configured
    reserves and marks it. Every later tick advances the reference price,
    lets the arbitrageur level the pool, runs the noise trades, applies the
    scheduled liquidity events and marks the position. Identical
    configurations produce identical event logs.

    Parameters:
        config: the configuration of the run
        observer: optional function called with every event as it is logged

    Raises:
        ConfigInvalidError: if the configuration cannot be run
    """
    price_rng, noise_rng = create_generators(config.seed)
    prices = config.price_process.path(config.ticks, price_rng).tolist()

    sim = _Simulation(config, observer)
    sim.open_position(0, prices[0])
    sim.mark(0, prices[0])

    for tick in range(1, config.ticks + 1):
        ref_price = prices[tick]
        sim.arbitrage(tick, ref_price)
        sim.noise_trades(tick, ref_price, noise_rng)
        sim.liquidity_events(tick)
        sim.mark(tick, ref_price)

    return SimRun(
        config=config,
        events=sim.log.events,
        marks=sim.marks,
        final_state=sim.pool,
        position=sim.position,
        total_shares=sim.total_shares,
        ledger=sim.ledger,
    )
