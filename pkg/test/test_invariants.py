import numpy as np

from pytest import approx, fixture, raises

from amm_lab.cfmm import swap
from amm_lab.errors import DomainExitError, NonFiniteRuleError, OutOfRangeError
from amm_lab.invariants import (
    CurveSample,
    PricingRule,
    check_invariant_constancy,
    derive_curve,
    implied_price,
)
from amm_lab.types import PoolKind, PoolState


def product(x, y):
    return x * y


def total(x, y):
    return x + y


@fixture
def constant_sum_sample():
    return derive_curve(PricingRule.constant(1.0), (50, 50), 90)


@fixture
def constant_product_sample():
    return derive_curve(PricingRule.ratio(), (100, 100), 400)


class TestPricingRule:
    def test_evaluation(self):
        assert PricingRule.constant(2)(1, 1) == 2
        assert PricingRule.ratio()(50, 200) == 4
        assert PricingRule.weighted_ratio(0.8, 0.2)(100, 100) == approx(4)

    def test_names(self):
        assert PricingRule.ratio().name == "ratio"
        assert PricingRule.constant(1).name == "constant(1)"

    def test_non_finite(self):
        rule = PricingRule(lambda x, y: float("nan"), name="broken")
        with raises(NonFiniteRuleError):
            rule(1, 1)
        with raises(NonFiniteRuleError):
            PricingRule(lambda x, y: -1.0)(1, 1)
        with raises(NonFiniteRuleError):
            derive_curve(rule, (1, 1), 2)

    def test_from_pool(self):
        pool = PoolState.create(
            PoolKind.CONSTANT_MEAN,
            {"x": 100.0, "y": 100.0},
            weights={"x": 0.8, "y": 0.2},
        )
        rule = PricingRule.from_pool(pool)
        assert rule(100, 100) == approx(4)
        assert rule(50, 200) == approx(16)


class TestDeriveCurve:
    def test_constant_sum(self, constant_sum_sample):
        sample = constant_sum_sample
        assert len(sample) == 10001
        assert not sample.domain_exit
        assert sample.xs[0] == 50 and sample.xs[-1] == approx(90)
        assert np.max(np.abs(sample.xs + sample.ys - 100)) < 1e-10

    def test_constant_product(self, constant_product_sample):
        sample = constant_product_sample
        assert sample.rule_name == "ratio"
        assert np.max(np.abs(sample.xs * sample.ys / 10000 - 1)) < 1e-6

    def test_weighted_product(self):
        sample = derive_curve(PricingRule.weighted_ratio(0.8, 0.2), (100, 100), 400)
        assert check_invariant_constancy(
            sample, lambda x, y: x**0.8 * y**0.2
        ) < 1e-6

    def test_pool_rule(self):
        pool = PoolState.constant_product({"alpha": 100.0, "beta": 100.0})
        sample = derive_curve(PricingRule.from_pool(pool), (100, 100), 400)
        assert check_invariant_constancy(sample, product) < 1e-6

    def test_matches_pool_swaps(self, constant_product_sample):
        pool = PoolState.constant_product({"alpha": 100.0, "beta": 100.0})
        sample = constant_product_sample
        for k in range(1, len(sample), 500):
            x, y = sample.xs[k], sample.ys[k]
            quote = swap(pool, "alpha", x - 100)
            assert y == approx(100 - quote.output_amount, rel=1e-6)
            assert quote.new_state.balances == approx((x, y), rel=1e-6)

    def test_fourth_order_convergence(self):
        rule = PricingRule.ratio()
        coarse = derive_curve(rule, (100, 100), 400, steps=20)
        fine = derive_curve(rule, (100, 100), 400, steps=40)
        coarse_error = check_invariant_constancy(coarse, product)
        fine_error = check_invariant_constancy(fine, product)
        assert fine_error > 0
        assert coarse_error / fine_error >= 8

    def test_domain_exit(self):
        rule = PricingRule.constant(1.0)
        sample = derive_curve(rule, (50, 49.7), 150, steps=80)
        assert sample.domain_exit
        assert len(sample) < 81
        assert np.all(sample.ys > 0)
        assert sample.xs[-1] < 100

        with raises(DomainExitError):
            derive_curve(rule, (50, 49.7), 150, steps=80, strict=True)

    def test_invalid_arguments(self):
        rule = PricingRule.ratio()
        with raises(ValueError):
            derive_curve(rule, (0, 1), 2)
        with raises(ValueError):
            derive_curve(rule, (1, 1), 1)
        with raises(ValueError):
            derive_curve(rule, (1, 1), 2, steps=1)


class TestCheckInvariantConstancy:
    def test_constant_sum(self, constant_sum_sample):
        assert check_invariant_constancy(constant_sum_sample, total) < 1e-10

    def test_wrong_candidate(self, constant_product_sample):
        assert check_invariant_constancy(constant_product_sample, total) > 0.1

    def test_constant_product(self, constant_product_sample):
        assert check_invariant_constancy(constant_product_sample, product) < 1e-6


class TestImpliedPrice:
    def test_constant_sum(self, constant_sum_sample):
        for x in (50, 61.3, 75, 90):
            assert implied_price(constant_sum_sample, x) == approx(1.0, abs=1e-8)

    def test_constant_product(self):
        sample = derive_curve(PricingRule.ratio(), (25, 400), 400)
        assert implied_price(sample, 100) == approx(1.0, abs=1e-4)
        assert implied_price(sample, 50) == approx(4.0, abs=1e-3)

    def test_out_of_range(self, constant_product_sample):
        with raises(OutOfRangeError):
            implied_price(constant_product_sample, 50)
        with raises(OutOfRangeError):
            implied_price(constant_product_sample, 400.5)

    def test_too_short(self):
        sample = CurveSample(xs=np.array([1.0]), ys=np.array([1.0]))
        with raises(OutOfRangeError):
            implied_price(sample, 1.0)
