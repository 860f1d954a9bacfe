from hypothesis import given, strategies as st
from math import sqrt
from pytest import approx, fixture, mark, raises
from scipy.integrate import quad

from amm_lab.analytics import (
    Direction,
    arbitrage_to_price,
    average_execution_price,
    depth_curve,
    depth_loss,
    il_curve,
    impact_curve,
    impermanent_loss,
    measured_depth_loss,
    measured_impermanent_loss,
    measured_price_impact,
    pool_value,
    price_impact,
)
from amm_lab.cfmm import invariant_value, quote_input_for_exact_output, spot_price
from amm_lab.errors import FOutOfRangeError, InvalidPoolError, NonPositiveXiError
from amm_lab.types import FeeParam, PoolState

FRACTIONS = [0.01] + [round(0.05 * i, 2) for i in range(1, 20)]
XIS = [0.25, 0.5, 1, 1.5, 2, 4, 10]


@fixture
def pool():
    return PoolState.constant_product({"alpha": 100.0, "beta": 100.0})


@fixture
def skewed_pool():
    return PoolState.constant_product({"alpha": 40.0, "beta": 250.0})


class TestDirection:
    def test_aliases(self):
        assert Direction.to_direction("buy") is Direction.BUY_FROM_POOL
        assert Direction.to_direction("sell") is Direction.SELL_TO_POOL
        assert Direction.to_direction("sell_to_pool") is Direction.SELL_TO_POOL
        assert Direction.to_direction(Direction.BUY_FROM_POOL) is Direction.BUY_FROM_POOL
        with raises(ValueError):
            Direction.to_direction("hold")


class TestPriceImpact:
    def test_examples(self):
        assert price_impact(0, "buy") == 0
        assert price_impact(0.5, "buy") == approx(300)
        assert price_impact(0.1, "buy") == approx(23.456790123456, rel=1e-12)
        assert price_impact(1.0, "sell") == approx(-75)

    def test_out_of_range(self):
        for f in (-0.1, 1.0, 1.5):
            with raises(FOutOfRangeError):
                price_impact(f, "buy")
        with raises(FOutOfRangeError):
            price_impact(-0.1, "sell")

    @mark.parametrize("direction", ["buy", "sell"])
    def test_measured(self, skewed_pool, direction):
        for f in FRACTIONS:
            assert measured_price_impact(skewed_pool, f, direction) == approx(
                price_impact(f, direction), rel=1e-9, abs=1e-9
            )

    def test_measured_point(self, pool):
        assert measured_price_impact(pool, 0.5, "buy") == approx(300, rel=1e-9)
        assert measured_price_impact(pool, 0, "buy") == 0

    def test_nonlinear(self):
        assert price_impact(0.2, "buy") > 2 * price_impact(0.1, "buy")


class TestImpermanentLoss:
    def test_examples(self):
        assert impermanent_loss(1, 1) == approx(0, abs=1e-12)
        assert impermanent_loss(4, 1) == approx(-20, abs=1e-9)
        assert impermanent_loss(1.5) == approx(-2.0204, abs=1e-4)

    def test_fee(self):
        gamma = FeeParam(0.997)
        assert impermanent_loss(4, gamma) == impermanent_loss(4, 0.997)
        assert impermanent_loss(1, 0.997) > 0

    @given(st.floats(min_value=1e-3, max_value=1e3))
    def test_symmetry(self, xi):
        assert impermanent_loss(xi) == approx(impermanent_loss(1 / xi), abs=1e-12)

    @given(st.floats(min_value=1e-3, max_value=1e3))
    def test_never_positive_without_fees(self, xi):
        assert impermanent_loss(xi) <= 1e-12

    def test_invalid(self):
        for xi in (0, -1, float("inf")):
            with raises(NonPositiveXiError):
                impermanent_loss(xi)
            with raises(NonPositiveXiError):
                measured_impermanent_loss(
                    PoolState.constant_product({"alpha": 1.0, "beta": 1.0}), xi
                )

    @mark.parametrize("gamma", [1.0, 0.997])
    def test_arbitrage_oracle(self, skewed_pool, gamma):
        pool = PoolState.constant_product(skewed_pool.reserves, gamma=gamma)
        for xi in XIS:
            assert measured_impermanent_loss(pool, xi) == approx(
                impermanent_loss(xi, gamma), abs=1e-9
            )

    def test_curve(self):
        reports = il_curve(XIS, 0.997)
        assert [report.xi for report in reports] == XIS
        assert reports[0].gamma == FeeParam(0.997)
        assert reports[5].pct_loss == impermanent_loss(4, 0.997)
        assert reports[5].to_json() == {
            "xi": 4.0,
            "gamma": 0.997,
            "pct_loss": impermanent_loss(4, 0.997),
        }


class TestDepthLoss:
    def test_examples(self):
        assert depth_loss(0, "buy") == 0
        for f in (0.1, 0.5, 0.9):
            assert depth_loss(f, "buy") == approx(f * 100, rel=1e-12)
        assert depth_loss(1.0, "sell") == approx(50)

    @mark.parametrize("f", [0.1, 0.5, 0.9])
    def test_quadrature_oracle(self, pool, f):
        k = invariant_value(pool)
        b_base = pool.balance_of("alpha")
        paid, _ = quad(lambda x: k / x**2, b_base * (1 - f), b_base)

        assert paid == approx(k * f / (b_base * (1 - f)), rel=1e-9)
        assert paid == approx(
            quote_input_for_exact_output(pool, "alpha", f * b_base), rel=1e-9
        )

        entry_price = spot_price(pool, "alpha", "beta")
        deep_output = paid / entry_price
        loss = (deep_output - f * b_base) / deep_output * 100
        assert loss == approx(depth_loss(f, "buy"), rel=1e-9)
        assert paid / (f * b_base) == approx(average_execution_price(pool, f), rel=1e-9)

    @mark.parametrize("direction", ["buy", "sell"])
    def test_measured(self, skewed_pool, direction):
        for f in FRACTIONS:
            assert measured_depth_loss(skewed_pool, f, direction) == approx(
                depth_loss(f, direction), rel=1e-9, abs=1e-9
            )

    @mark.parametrize("direction", ["buy", "sell"])
    def test_measured_with_fee(self, direction):
        pool = PoolState.constant_product({"alpha": 40.0, "beta": 250.0}, gamma=0.997)
        scale = 1.0 if direction == "buy" else 0.997
        for f in FRACTIONS:
            assert measured_depth_loss(pool, f, direction) == approx(
                depth_loss(scale * f, direction), rel=1e-9, abs=1e-9
            )

    def test_curves(self):
        reports = depth_curve([0.1, 0.5], "buy")
        assert [report.pct_loss for report in reports] == approx([10, 50])
        assert reports[0].direction is Direction.BUY_FROM_POOL

        reports = impact_curve([0.5], "sell")
        assert reports[0].pct_change == approx(-(1 - 1 / 1.5**2) * 100)
        assert reports[0].to_json()["direction"] == "sell_to_pool"


class TestAverageExecutionPrice:
    def test_examples(self, pool):
        assert average_execution_price(pool, 0.5) == approx(2.0)
        assert average_execution_price(pool, 0.9) == approx(10.0)
        assert average_execution_price(pool, 0) == approx(spot_price(pool, "alpha", "beta"))

    def test_scaling(self, skewed_pool):
        for f in FRACTIONS:
            assert average_execution_price(skewed_pool, f) == approx(
                250 / 40 / (1 - f), rel=1e-9
            )

    def test_fee_included(self):
        pool = PoolState.constant_product({"alpha": 40.0, "beta": 250.0}, gamma=0.997)
        for f in FRACTIONS:
            paid = quote_input_for_exact_output(pool, "alpha", f * 40)
            assert average_execution_price(pool, f) == approx(paid / (f * 40), rel=1e-9)
        assert average_execution_price(pool, 0) == approx(spot_price(pool, "alpha", "beta"))

    def test_invalid(self, pool):
        with raises(FOutOfRangeError):
            average_execution_price(pool, 1.0)


class TestArbitrageToPrice:
    def test_level_up(self, pool):
        trade = arbitrage_to_price(pool, 4)
        assert trade.new_state.balances == approx((50, 200))
        assert trade.spot_after == approx(4)
        assert trade.input_asset == "beta" and trade.output_asset == "alpha"
        assert trade.input_amount == approx(100)
        assert trade.output_amount == approx(50)
        assert trade.xi == approx(4)

    def test_level_down(self, pool):
        trade = arbitrage_to_price(pool, 0.25)
        assert trade.new_state.balances == approx((200, 50))
        assert trade.input_asset == "alpha"

    def test_null_trade(self, pool):
        trade = arbitrage_to_price(pool, 1.0)
        assert trade.is_null
        assert trade.new_state is pool
        assert trade.input_amount == trade.output_amount == 0

    def test_fee(self):
        pool = PoolState.constant_product({"alpha": 100.0, "beta": 100.0}, gamma=0.997)
        trade = arbitrage_to_price(pool, 2.5)
        assert trade.spot_after == approx(2.5, rel=1e-12)
        assert invariant_value(trade.new_state) == approx(invariant_value(pool), rel=1e-12)
        assert arbitrage_to_price(trade.new_state, 2.5).is_null

    def test_invalid(self, pool):
        with raises(ValueError):
            arbitrage_to_price(pool, 0)
        with raises(InvalidPoolError):
            arbitrage_to_price(
                PoolState.create("constant_sum", {"alpha": 1.0, "beta": 1.0}), 2
            )

    @mark.parametrize("price", [0.25, 1, 4, 16])
    def test_pool_value_after_leveling(self, pool, price):
        leveled = arbitrage_to_price(pool, price).new_state
        k = invariant_value(pool)
        assert pool_value(leveled, price) == approx(2 * sqrt(k * price), rel=1e-9)
