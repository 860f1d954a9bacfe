from io import StringIO
from pytest import approx, fixture, mark, raises

from amm_lab.errors import (
    AMMError,
    ConfigInvalidError,
    PoolExhaustedError,
    exit_code_for,
)
from amm_lab.sim import SimEvent, SimEventKind
from amm_lab.utils.concurrency import collapse_excgroups, gather_in_threads
from amm_lab.utils.console import ConsoleReporter, EventPrinter, format_number
from amm_lab.utils.registry import Registry
from amm_lab.utils.timing import timing


class TestRegistry:
    @fixture
    def registry(self):
        return Registry("curve")

    def test_register_and_find(self, registry):
        registry.register("cp", 1)

        @registry.register("cs")
        def constant_sum():
            pass

        assert registry.find("cp") == 1
        assert registry.find("cs") is constant_sum
        assert "cp" in registry
        assert list(registry) == ["cp", "cs"]
        assert list(registry.keys()) == ["cp", "cs"]

    def test_missing(self, registry):
        with raises(KeyError, match="no curve registered"):
            registry.find("cm")
        assert registry.find("cm", default=None) is None

    def test_duplicate(self, registry):
        registry.register("cp", 1)
        with raises(ValueError, match="already registered"):
            registry.register("cp", 2)


class TestTiming:
    def test_fake_clock(self):
        readings = iter([10.0, 12.5])
        lines = []
        with timing("sweep", timer=lambda: next(readings), report=lines.append) as t:
            pass
        assert t.elapsed == approx(2.5)
        assert lines == ["sweep: 2.500s"]

    def test_silent_without_description(self):
        lines = []
        with timing(timer=lambda: 1.0, report=lines.append) as t:
            pass
        assert t.elapsed == 0
        assert lines == []


def square(value):
    return value * value


def fail(value):
    raise ConfigInvalidError(f"bad run {value}")


class TestGatherInThreads:
    @mark.anyio
    async def test_order(self):
        jobs = [(square, value) for value in range(20)]
        assert await gather_in_threads(jobs, 3) == [value * value for value in range(20)]

    @mark.anyio
    async def test_callables(self):
        assert await gather_in_threads([lambda: "a", lambda: "b"]) == ["a", "b"]

    @mark.anyio
    async def test_single_error_is_unwrapped(self):
        with raises(ConfigInvalidError, match="bad run 7"):
            await gather_in_threads([(square, 1), (fail, 7)])

    def test_collapse(self):
        with raises(KeyError):
            with collapse_excgroups():
                raise KeyError("x")


class TestFormatNumber:
    def test_floats(self):
        assert format_number(1.0) == "1.000000000"
        assert format_number(-20.000000000000004) == "-20.000000000"
        assert format_number(1e-12) == "0.000000000"

    def test_negative_zero(self):
        assert format_number(-0.0) == "0.000000000"
        assert format_number(-1e-12) == "0.000000000"

    def test_others(self):
        assert format_number(3) == "3"
        assert format_number("gbm") == "gbm"


class TestConsoleReporter:
    @fixture
    def stream(self):
        return StringIO()

    def test_plain_output(self, stream):
        reporter = ConsoleReporter(stream)
        reporter.error("boom")
        reporter.warn("careful")
        reporter.info("hello")
        assert stream.getvalue().splitlines() == [
            "error: boom",
            "warning: careful",
            "hello",
        ]

    def test_table(self, stream):
        ConsoleReporter(stream, color=False).table({"seed": 42, "final_il_pct": -0.5})
        assert stream.getvalue().splitlines() == [
            "seed          42",
            "final_il_pct  -0.500000000",
        ]

    def test_event(self, stream):
        printer = EventPrinter(ConsoleReporter(stream, color=False))
        printer(SimEvent(tick=3, kind=SimEventKind.ARB, payload={"xi": 1.5}))
        line = stream.getvalue()
        assert "arb" in line
        assert "xi=1.500000000" in line
        assert line.lstrip().startswith("3 ")


class TestExitCodes:
    def test_codes(self):
        assert exit_code_for(PoolExhaustedError(150.0, 100.0)) == 1
        assert exit_code_for(AMMError("x")) == 1
        assert exit_code_for(FileNotFoundError("x")) == 2
        assert exit_code_for(ValueError("x")) == 2
