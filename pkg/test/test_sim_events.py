from pytest import approx, raises

from amm_lab.sim.events import (
    SUMMARY_COLUMNS,
    EventLog,
    SimEvent,
    SimEventKind,
    read_events_jsonl,
    write_events_jsonl,
    write_summary_csv,
)
from amm_lab.sim.ledger import POOL, Ledger, RunningSum


class TestLedger:
    def test_transfers(self):
        ledger = Ledger()
        ledger.endow("lp", "alpha", 100)
        ledger.transfer("lp", POOL, "alpha", 60)
        ledger.transfer("trader", POOL, "alpha", 5)

        assert ledger.accounts == ["lp", "pool", "trader"]
        assert ledger.balance("lp", "alpha") == 40
        assert ledger.balance(POOL, "alpha") == 65
        assert ledger.balance("trader", "alpha") == -5
        assert ledger.balances(POOL) == {"alpha": 65}
        assert ledger.endowment() == {"alpha": 100}
        assert ledger.totals() == {"alpha": 100}
        assert ledger.residuals() == {"alpha": 0}

    def test_compensated_sums(self):
        ledger = Ledger()
        ledger.endow("lp", "beta", 1.0)
        ledger.transfer("whale", "lp", "beta", 1e16)
        ledger.transfer("lp", "whale", "beta", 1e16)
        assert ledger.balance("lp", "beta") == 1.0
        assert ledger.residuals() == {"beta": 0.0}

    def test_empty(self):
        ledger = Ledger()
        assert ledger.residuals() == {}
        assert ledger.balance("nobody", "alpha") == 0
        assert ledger.accounts == []

    def test_running_sum(self):
        total = RunningSum()
        assert total.value == 0.0
        for value in (1.0, 1e100, 1.0, -1e100):
            total.add(value)
        assert total.value == 2.0

    def test_many_small_transfers(self):
        ledger = Ledger()
        ledger.endow("lp", "alpha", 1.0)
        for _ in range(10000):
            ledger.transfer("lp", POOL, "alpha", 0.1)
            ledger.transfer(POOL, "lp", "alpha", 0.1)
        ledger.transfer("lp", POOL, "alpha", 0.1)
        assert ledger.balance(POOL, "alpha") == 0.1
        assert ledger.balance("lp", "alpha") == approx(0.9, abs=1e-15)
        assert ledger.residuals() == {"alpha": approx(0.0, abs=1e-15)}


class TestEventLog:
    def test_append(self):
        seen = []
        log = EventLog(seen.append)
        event = log.append(0, SimEventKind.MARK, ref_price=1.0)
        log.append(0, SimEventKind.ARB, xi=2.0)
        log.append(3, SimEventKind.TRADE, fee_paid=0.03)

        assert len(log) == 3
        assert event == SimEvent(0, SimEventKind.MARK, {"ref_price": 1.0})
        assert [e.kind for e in log] == [
            SimEventKind.MARK,
            SimEventKind.ARB,
            SimEventKind.TRADE,
        ]
        assert seen == log.events

    def test_decreasing_tick(self):
        log = EventLog()
        log.append(2, SimEventKind.MARK)
        with raises(ValueError):
            log.append(1, SimEventKind.MARK)

    def test_jsonl(self, tmp_path):
        log = EventLog()
        log.append(0, SimEventKind.LP_DEPOSIT, amounts={"beta": 1.0, "alpha": 2.0})
        log.append(1, SimEventKind.MARK, il_pct=-0.1234567890123)
        path = tmp_path / "events.jsonl"
        write_events_jsonl(log, path)

        lines = path.read_text().splitlines()
        assert len(lines) == 2
        assert lines[0] == (
            '{"kind": "lp_deposit", "payload": {"amounts": {"alpha": 2.0, '
            '"beta": 1.0}}, "tick": 0}'
        )
        assert read_events_jsonl(path) == log.events


class TestSummaryCsv:
    def test_format(self, tmp_path):
        path = tmp_path / "summary.csv"
        rows = [
            {
                "tick": 0,
                "ref_price": 1.0,
                "pool_value": 200.0,
                "hold_value": 200.0,
                "il_pct": -1e-15,
                "fees_cum": 0.0,
                "k": 10000.0,
            },
            {
                "tick": 1,
                "ref_price": 4.0,
                "pool_value": 400.0,
                "hold_value": 500.0,
                "il_pct": -20.0,
                "fees_cum": 1 / 3,
                "k": 10000.0,
            },
        ]
        write_summary_csv(rows, path)

        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(SUMMARY_COLUMNS)
        assert lines[1] == "0,1.000000000,200.000000000,200.000000000,0.000000000,0.000000000"
        assert lines[2] == "1,4.000000000,400.000000000,500.000000000,-20.000000000,0.333333333"
        assert float(lines[2].split(",")[-1]) == approx(1 / 3, abs=1e-9)
