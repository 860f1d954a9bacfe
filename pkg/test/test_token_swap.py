import numpy as np

from hypothesis import given, settings, strategies as st
from math import sqrt
from pytest import approx, fixture, mark, raises

from amm_lab.cfmm import spot_price, swap
from amm_lab.errors import (
    NonPositiveInputError,
    PoolExhaustedError,
    SupplyExceededError,
)
from amm_lab.token_swap import (
    intermediary_input_for_output,
    intermediary_price,
    purchase_intermediary,
    sell_intermediary,
    swap_via_intermediary,
    to_constant_mean,
    token_swap_spot_price,
)
from amm_lab.types import PoolKind, PoolState, Side, TokenSwapState
from amm_lab.utils import relative_error

#: Reserve ratio close enough to 1 to check the linear limit of the formulas
NEARLY_ONE = 1 - 1e-12


@fixture
def state():
    return TokenSwapState(reserve_a=100, reserve_b=100, supply=1000, rr_a=0.5)


class TestIntermediaryPrice:
    def test_price(self, state):
        assert intermediary_price(state, "a") == approx(0.2)
        assert intermediary_price(state, Side.B) == approx(0.2)

    def test_linear_limit(self):
        state = TokenSwapState(reserve_a=500, reserve_b=1, supply=500, rr_a=NEARLY_ONE)
        assert intermediary_price(state, "a") == approx(1.0, rel=1e-9)

    def test_spot_price(self):
        state = TokenSwapState(reserve_a=100, reserve_b=400, supply=1000, rr_a=0.8)
        expected = (400 / 0.2) / (100 / 0.8)
        assert token_swap_spot_price(state, "a") == approx(expected)
        assert token_swap_spot_price(state, "b") == approx(1 / expected)
        assert token_swap_spot_price(state, "a") == approx(
            spot_price(to_constant_mean(state), "a", "b")
        )


class TestPurchase:
    def test_purchase(self, state):
        minted, new_state = purchase_intermediary(state, "b", 10)
        assert minted == approx(1000 * (sqrt(1.1) - 1), rel=1e-12)
        assert minted == approx(48.808848, abs=1e-6)
        assert new_state.reserve_b == 110
        assert new_state.reserve_a == 100
        assert new_state.supply == approx(1000 + minted)

    def test_zero(self, state):
        minted, new_state = purchase_intermediary(state, "b", 0)
        assert minted == 0
        assert new_state is state

    def test_linear_limit(self):
        state = TokenSwapState(reserve_a=200, reserve_b=1, supply=1000, rr_a=NEARLY_ONE)
        minted, _ = purchase_intermediary(state, "a", 30)
        assert minted == approx(1000 * 30 / 200, rel=1e-9)

    def test_negative(self, state):
        with raises(NonPositiveInputError):
            purchase_intermediary(state, "a", -1)


class TestSale:
    def test_sale_after_purchase(self, state):
        minted, intermediate = purchase_intermediary(state, "b", 10)
        received, final = sell_intermediary(intermediate, "a", minted)
        assert received == approx(9.090909, abs=1e-6)
        assert received == approx(100 / 11, rel=1e-12)
        assert final.supply == approx(1000, rel=1e-12)
        assert final.reserve_a == approx(100 - received)

    def test_zero(self, state):
        received, new_state = sell_intermediary(state, "a", 0)
        assert received == 0
        assert new_state is state

    def test_linear_limit(self):
        state = TokenSwapState(reserve_a=200, reserve_b=1, supply=1000, rr_a=NEARLY_ONE)
        received, _ = sell_intermediary(state, "a", 50)
        assert received == approx(200 * 50 / 1000, rel=1e-9)

    def test_supply_exceeded(self, state):
        with raises(SupplyExceededError):
            sell_intermediary(state, "a", 1000)
        with raises(SupplyExceededError):
            sell_intermediary(state, "a", 2000)
        with raises(NonPositiveInputError):
            sell_intermediary(state, "a", -1)

    @mark.parametrize("side", ["a", "b"])
    @given(
        rr_a=st.floats(min_value=0.05, max_value=0.95),
        reserve=st.floats(min_value=1, max_value=1e6),
        supply=st.floats(min_value=1, max_value=1e6),
        fraction=st.floats(min_value=1e-6, max_value=5),
    )
    @settings(max_examples=300, deadline=None)
    def test_same_side_round_trip(self, side, rr_a, reserve, supply, fraction):
        state = TokenSwapState(
            reserve_a=reserve, reserve_b=reserve, supply=supply, rr_a=rr_a
        )
        paid = fraction * reserve
        minted, intermediate = purchase_intermediary(state, side, paid)
        received, final = sell_intermediary(intermediate, side, minted)
        assert received == approx(paid, rel=1e-9, abs=1e-9)
        assert final.supply == approx(supply, rel=1e-9)
        assert final.reserve(side) == approx(reserve, rel=1e-9)


class TestSwapViaIntermediary:
    def test_equal_ratios(self, state):
        quote = swap_via_intermediary(state, "b", 10)
        assert quote.input_asset == "b"
        assert quote.output_asset == "a"
        assert quote.output_amount == approx(100 / 11, rel=1e-12)
        assert quote.fee_paid == 0
        assert quote.new_state.supply == approx(state.supply, rel=1e-12)

    def test_unequal_ratios(self):
        state = TokenSwapState(reserve_a=100, reserve_b=100, supply=1000, rr_a=0.8)
        quote = swap_via_intermediary(state, "b", 10)
        assert quote.output_amount == approx(100 * (1 - (100 / 110) ** 0.25), rel=1e-12)
        assert quote.output_amount == approx(2.354556, abs=1e-6)

    def test_closed_form(self):
        state = TokenSwapState(reserve_a=250, reserve_b=80, supply=37, rr_a=0.3)
        amount = 17.5
        expected = 250 - 250 / ((80 + amount) / 80) ** (0.7 / 0.3)
        assert swap_via_intermediary(state, "b", amount).output_amount == approx(
            expected, rel=1e-12
        )

    def test_zero(self, state):
        quote = swap_via_intermediary(state, "a", 0)
        assert quote.output_amount == 0
        assert quote.new_state == state

    def test_spot_prices(self, state):
        quote = swap_via_intermediary(state, "b", 10)
        assert quote.spot_before == approx(1.0)
        assert quote.spot_after == approx(110 / (100 - quote.output_amount))

    def test_matches_constant_product_swap(self):
        rng = np.random.default_rng(20201106)
        n = 10000
        reserves_a = 10 ** rng.uniform(0, 6, n)
        reserves_b = 10 ** rng.uniform(0, 6, n)
        supplies = 10 ** rng.uniform(0, 6, n)
        fractions = 10 ** rng.uniform(-4, 1, n)

        worst = 0.0
        for b_a, b_b, s, f in zip(
            reserves_a.tolist(), reserves_b.tolist(), supplies.tolist(), fractions.tolist()
        ):
            amount = f * b_b
            state = TokenSwapState(reserve_a=b_a, reserve_b=b_b, supply=s, rr_a=0.5)
            pool = PoolState.constant_product({"a": b_a, "b": b_b})
            tsmm = swap_via_intermediary(state, "b", amount).output_amount
            cfmm = swap(pool, "b", amount).output_amount
            worst = max(worst, relative_error(tsmm, cfmm))

        assert worst <= 1e-9


class TestInverse:
    def test_exact_output(self, state):
        paid = intermediary_input_for_output(state, "a", 100 / 11)
        assert paid == approx(10, rel=1e-12)

    def test_round_trip_unequal_ratios(self):
        state = TokenSwapState(reserve_a=100, reserve_b=300, supply=1000, rr_a=0.7)
        paid = intermediary_input_for_output(state, "b", 120)
        assert swap_via_intermediary(state, "a", paid).output_amount == approx(
            120, rel=1e-12
        )

    def test_limits(self, state):
        assert intermediary_input_for_output(state, "a", 0) == 0
        with raises(PoolExhaustedError):
            intermediary_input_for_output(state, "a", 100)


class TestConstantMeanEquivalence:
    def test_mapping(self):
        state = TokenSwapState(
            reserve_a=100, reserve_b=300, supply=1000, rr_a=0.7, asset_a="x", asset_b="y"
        )
        pool = to_constant_mean(state)
        assert pool.kind is PoolKind.CONSTANT_MEAN
        assert pool.assets == ("x", "y")
        assert pool.balances == (100, 300)
        assert pool.weights == approx((0.7, 0.3))
        assert pool.gamma == 1.0

    @given(
        st.floats(min_value=0.05, max_value=0.95),
        st.floats(min_value=1, max_value=1e6),
        st.floats(min_value=1, max_value=1e6),
        st.floats(min_value=1, max_value=1e6),
        st.floats(min_value=1e-3, max_value=5),
    )
    @settings(max_examples=500, deadline=None)
    def test_any_reserve_ratio(self, rr_a, b_a, b_b, supply, fraction):
        state = TokenSwapState(reserve_a=b_a, reserve_b=b_b, supply=supply, rr_a=rr_a)
        amount = fraction * b_b
        tsmm = swap_via_intermediary(state, "b", amount).output_amount
        cfmm = swap(to_constant_mean(state), "b", amount).output_amount
        assert relative_error(tsmm, cfmm) <= 1e-9
