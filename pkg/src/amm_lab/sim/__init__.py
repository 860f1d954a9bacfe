"""Deterministic agent-based simulation of liquidity provision in a constant
product pool.
"""

from .config import LPEvent, LPEventKind, NoiseConfig, SimConfig
from .events import (
    EventLog,
    SimEvent,
    SimEventKind,
    read_events_jsonl,
    write_events_jsonl,
    write_summary_csv,
)
from .ledger import Ledger
from .liquidity import LPPosition, deposit, mint_shares, redeem_shares, withdraw
from .processes import GBMProcess, PriceProcess, PriceProcessRegistry, ReplayProcess
from .runner import MarkRecord, SimRun, run_simulation
from .sweep import SweepRow, run_volatility_sweep, volatility_sweep

__all__ = (
    "EventLog",
    "GBMProcess",
    "LPEvent",
    "LPEventKind",
    "LPPosition",
    "Ledger",
    "MarkRecord",
    "NoiseConfig",
    "PriceProcess",
    "PriceProcessRegistry",
    "ReplayProcess",
    "SimConfig",
    "SimEvent",
    "SimEventKind",
    "SimRun",
    "SweepRow",
    "deposit",
    "mint_shares",
    "read_events_jsonl",
    "redeem_shares",
    "run_simulation",
    "run_volatility_sweep",
    "volatility_sweep",
    "withdraw",
    "write_events_jsonl",
    "write_summary_csv",
)
