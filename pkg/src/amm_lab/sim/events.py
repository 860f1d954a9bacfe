"""Simulation events and their on-disk formats: the event log is stored as
JSON lines, the per-tick marks as CSV with fixed nine-decimal precision.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Union

from amm_lab.utils.console import format_number

__all__ = (
    "EventLog",
    "SimEvent",
    "SimEventKind",
    "SUMMARY_COLUMNS",
    "read_events_jsonl",
    "write_events_jsonl",
    "write_summary_csv",
)


class SimEventKind(Enum):
    ARB = "arb"
    TRADE = "trade"
    LP_DEPOSIT = "lp_deposit"
    LP_WITHDRAW = "lp_withdraw"
    MARK = "mark"


@dataclass(frozen=True)
class SimEvent:
    """A single timestamped entry of the event log."""

    tick: int
    kind: SimEventKind
    payload: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "SimEvent":
        return cls(
            tick=int(obj["tick"]),
            kind=SimEventKind(obj["kind"]),
            payload=dict(obj.get("payload", {})),
        )

    def to_json(self) -> Dict[str, Any]:
        return {"tick": self.tick, "kind": self.kind.value, "payload": self.payload}


#: Type specification for functions that observe events as they are logged
EventObserver = Callable[[SimEvent], None]


class EventLog:
    """Append-only list of simulation events with non-decreasing ticks."""

    _events: List[SimEvent]
    _observer: Optional[EventObserver]

    def __init__(self, observer: Optional[EventObserver] = None):
        """Constructor.

        Parameters:
            observer: optional function to call with every event as soon as
                it is appended
        """
        self._events = []
        self._observer = observer

    def __iter__(self) -> Iterator[SimEvent]:
        return iter(self._events)

    def __len__(self) -> int:
        return len(self._events)

    @property
    def events(self) -> List[SimEvent]:
        return list(self._events)

    def append(self, tick: int, kind: SimEventKind, **payload: Any) -> SimEvent:
        """Appends a new event to the log.

        Raises:
            ValueError: if the tick is smaller than the tick of the last
                event
        """
        if self._events and tick < self._events[-1].tick:
            raise ValueError(
                f"tick {tick} precedes the last logged tick {self._events[-1].tick}"
            )
        event = SimEvent(tick=tick, kind=kind, payload=payload)
        self._events.append(event)
        if self._observer is not None:
            self._observer(event)
        return event


#: Columns of the summary CSV, in order
SUMMARY_COLUMNS = ("tick", "ref_price", "pool_value", "hold_value", "il_pct", "fees_cum")


def write_events_jsonl(events: Iterable[SimEvent], path: Union[str, Path]) -> None:
    """Writes events to a JSON-lines file, one event per line, with sorted
    keys and full float precision.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fp:
        for event in events:
            fp.write(json.dumps(event.to_json(), sort_keys=True))
            fp.write("\n")


def read_events_jsonl(path: Union[str, Path]) -> List[SimEvent]:
    with open(path, encoding="utf-8") as fp:
        return [SimEvent.from_json(json.loads(line)) for line in fp if line.strip()]


def write_summary_csv(
    rows: Iterable[Dict[str, Any]], path: Union[str, Path]
) -> None:
    """Writes per-tick summary rows to a CSV file with the columns listed in
    `SUMMARY_COLUMNS`.
    """
    with open(path, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for row in rows:
            writer.writerow([format_number(row[column]) for column in SUMMARY_COLUMNS])
