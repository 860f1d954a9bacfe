"""Double-entry balance sheet of a simulation run."""

from collections import defaultdict
from math import fsum
from typing import DefaultDict, Dict, List

from amm_lab.types import AssetId

__all__ = ("Ledger", "RunningSum")


#: Account name of the pool itself
POOL = "pool"


class RunningSum:
    """Sum of a stream of floats with Neumaier compensation, so that adding
    and later removing a large amount does not erase small balances.
    """

    __slots__ = ("_sum", "_compensation")

    def __init__(self):
        self._sum = 0.0
        self._compensation = 0.0

    def add(self, value: float) -> None:
        total = self._sum + value
        if abs(self._sum) >= abs(value):
            self._compensation += (self._sum - total) + value
        else:
            self._compensation += (value - total) + self._sum
        self._sum = total

    @property
    def value(self) -> float:
        return self._sum + self._compensation


class Ledger:
    """Balance sheet tracking every token held by the pool and by the agents
    of a simulation.

    Tokens enter the system only through `endow()`; afterwards every
    movement is a `transfer()` that debits one account and credits another
    by the same amount, so the total of each asset across all accounts must
    equal its endowment. Balances are kept as running sums; queries do not
    depend on the length of the history.
    """

    _balances: DefaultDict[str, DefaultDict[AssetId, RunningSum]]
    _endowment: DefaultDict[AssetId, RunningSum]

    def __init__(self):
        """Constructor."""
        self._balances = defaultdict(lambda: defaultdict(RunningSum))
        self._endowment = defaultdict(RunningSum)

    @property
    def accounts(self) -> List[str]:
        return sorted(self._balances)

    def balance(self, account: str, asset: AssetId) -> float:
        """Returns the balance of an account in the given asset."""
        entry = self._balances.get(account, {}).get(asset)
        return entry.value if entry is not None else 0.0

    def balances(self, account: str) -> Dict[AssetId, float]:
        return {
            asset: entry.value
            for asset, entry in self._balances.get(account, {}).items()
        }

    def endow(self, account: str, asset: AssetId, amount: float) -> None:
        """Credits newly created tokens to an account."""
        self._balances[account][asset].add(amount)
        self._endowment[asset].add(amount)

    def endowment(self) -> Dict[AssetId, float]:
        """Returns the total amount of each asset that entered the system."""
        return {asset: entry.value for asset, entry in self._endowment.items()}

    def totals(self) -> Dict[AssetId, float]:
        """Returns the total amount of each asset held across all accounts."""
        values: DefaultDict[AssetId, List[float]] = defaultdict(list)
        for account in self._balances.values():
            for asset, entry in account.items():
                values[asset].append(entry.value)
        return {asset: fsum(items) for asset, items in values.items()}

    def transfer(self, source: str, target: str, asset: AssetId, amount: float) -> None:
        """Moves tokens from one account to another. Accounts may go negative;
        external agents are assumed to have unlimited credit.
        """
        self._balances[source][asset].add(-amount)
        self._balances[target][asset].add(amount)

    def residuals(self) -> Dict[AssetId, float]:
        """Returns, for each asset, the difference between the total held
        across all accounts and the endowment. Zero for a closed balance
        sheet.
        """
        totals, endowment = self.totals(), self.endowment()
        return {
            asset: totals.get(asset, 0.0) - endowment.get(asset, 0.0)
            for asset in sorted(set(totals) | set(endowment))
        }
