"""Derivation of trading curves from pricing rules.

A pricing rule ``p(x, y)`` states the price of token x in units of token y
that a pool should offer at reserves ``(x, y)``. Since ``p = -dy/dx``, the
trading curve through a starting point is the solution of that ordinary
differential equation; a candidate invariant is correct exactly when it
stays constant along the curve.

Rules are assumed to be smooth (Lipschitz in y) on the integration domain;
the integrator does not check this.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import isfinite
from typing import Callable, List, Optional, Tuple

import numpy as np

from amm_lab.curves import find as find_curve
from amm_lab.errors import DomainExitError, NonFiniteRuleError, OutOfRangeError
from amm_lab.types import AssetId, PoolState

__all__ = (
    "CurveSample",
    "PricingRule",
    "check_invariant_constancy",
    "derive_curve",
    "implied_price",
)

#: Default number of integration steps
DEFAULT_STEPS = 10000


@dataclass(frozen=True)
class PricingRule:
    """A pricing rule ``p(x, y) = -dy/dx`` with a short descriptive name."""

    eval: Callable[[float, float], float]
    name: str = "custom"

    def __call__(self, x: float, y: float) -> float:
        """Evaluates the rule and checks that the price is positive and
        finite.

        Raises:
            NonFiniteRuleError: if the rule yields NaN, infinity or a
                non-positive price
        """
        value = float(self.eval(x, y))
        if not isfinite(value) or value <= 0:
            raise NonFiniteRuleError(
                f"rule {self.name!r} gave {value!r} at x={x!r}, y={y!r}"
            )
        return value

    @classmethod
    def constant(cls, price: float = 1.0) -> "PricingRule":
        """Rule offering the same price everywhere; integrates to the
        constant sum family when the price is 1.
        """
        return cls(lambda x, y: price, name=f"constant({price:g})")

    @classmethod
    def ratio(cls) -> "PricingRule":
        """Rule pricing x by the reserve ratio ``y / x``; integrates to the
        constant product family.
        """
        return cls(lambda x, y: y / x, name="ratio")

    @classmethod
    def weighted_ratio(cls, w_x: float, w_y: float) -> "PricingRule":
        """Rule pricing x by the weighted reserve ratio
        ``(w_x / w_y) * (y / x)``; integrates to ``x ** w_x * y ** w_y = k``.
        """
        factor = w_x / w_y
        return cls(lambda x, y: factor * y / x, name=f"weighted_ratio({w_x:g},{w_y:g})")

    @classmethod
    def from_pool(
        cls,
        pool: PoolState,
        x_asset: Optional[AssetId] = None,
        y_asset: Optional[AssetId] = None,
    ) -> "PricingRule":
        """Returns the fee-free marginal price rule of a pool, restricted to
        the pair formed by the two given assets (the first two assets of the
        pool by default).
        """
        x_asset = x_asset or pool.assets[0]
        y_asset = y_asset or pool.other_asset(x_asset)
        w_x, w_y = pool.weight_of(x_asset), pool.weight_of(y_asset)
        curve = find_curve(pool.kind)
        return cls(
            lambda x, y: curve.marginal_price(x, y, w_x, w_y),
            name=f"{pool.kind.value}({x_asset}/{y_asset})",
        )


@dataclass(frozen=True, eq=False)
class CurveSample:
    """Points of a trading curve, ordered by strictly increasing x.

    ``domain_exit`` is set when the integration stopped early because the
    next step would have taken y to zero or below.
    """

    xs: np.ndarray
    ys: np.ndarray
    domain_exit: bool = False
    rule_name: str = "custom"

    def __len__(self) -> int:
        return len(self.xs)

    @property
    def points(self) -> List[Tuple[float, float]]:
        return list(zip(self.xs.tolist(), self.ys.tolist()))

    @property
    def start(self) -> Tuple[float, float]:
        return float(self.xs[0]), float(self.ys[0])

    @cached_property
    def prices(self) -> np.ndarray:
        """Returns the implied price ``-dy/dx`` at every sample point, using
        central differences inside the sample and second-order one-sided
        differences at its ends.
        """
        if len(self.xs) < 2:
            raise OutOfRangeError("at least two points are needed to imply a price")
        edge_order = 2 if len(self.xs) > 2 else 1
        return -np.gradient(self.ys, self.xs, edge_order=edge_order)


def derive_curve(
    rule: PricingRule,
    start: Tuple[float, float],
    x_end: float,
    steps: int = DEFAULT_STEPS,
    *,
    strict: bool = False,
) -> CurveSample:
    """Integrates ``dy/dx = -p(x, y)`` from ``start`` to ``x_end`` with the
    classical fixed-step fourth-order Runge-Kutta scheme.

    Parameters:
        rule: the pricing rule
        start: the starting reserves ``(x0, y0)``
        x_end: the last x coordinate; must be larger than ``x0``
        steps: the number of integration steps
        strict: whether to raise an error instead of returning a truncated
            sample when the curve leaves the positive quadrant

    Returns:
        the sampled curve with ``steps + 1`` points, or fewer if the
        integration stopped early

    Raises:
        ValueError: if the starting point, end point or step count are
            invalid
        DomainExitError: if ``strict`` is set and y would reach zero
        NonFiniteRuleError: if the rule yields an invalid price inside the
            positive quadrant
    """
    x0, y0 = float(start[0]), float(start[1])
    if not (x0 > 0 and y0 > 0):
        raise ValueError(f"starting point must be positive, got {start!r}")
    if not x_end > x0:
        raise ValueError(f"x_end must be larger than x0, got {x_end!r}")
    if steps < 2:
        raise ValueError(f"at least two steps are needed, got {steps!r}")

    xs = np.linspace(x0, x_end, steps + 1)
    ys = np.empty(steps + 1)
    ys[0] = y0
    h = (x_end - x0) / steps
    half = h / 2

    count = steps + 1
    y = y0
    for i in range(steps):
        x = float(xs[i])
        k1 = -rule(x, y)
        y2 = y + half * k1
        if y2 <= 0:
            count = i + 1
            break
        k2 = -rule(x + half, y2)
        y3 = y + half * k2
        if y3 <= 0:
            count = i + 1
            break
        k3 = -rule(x + half, y3)
        y4 = y + h * k3
        if y4 <= 0:
            count = i + 1
            break
        k4 = -rule(x + h, y4)
        y_next = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if y_next <= 0:
            count = i + 1
            break
        ys[i + 1] = y = y_next

    domain_exit = count < steps + 1
    if domain_exit and strict:
        raise DomainExitError(
            f"curve of rule {rule.name!r} reaches y = 0 before x = {x_end!r}"
        )

    return CurveSample(
        xs=xs[:count].copy(),
        ys=ys[:count].copy(),
        domain_exit=domain_exit,
        rule_name=rule.name,
    )


def check_invariant_constancy(
    sample: CurveSample, candidate: Callable[[float, float], float]
) -> float:
    """Returns the largest relative deviation of a candidate invariant along
    the sample, measured against its value at the first point.

    Parameters:
        sample: the sampled trading curve
        candidate: the candidate invariant ``k(x, y)``
    """
    x0, y0 = sample.start
    reference = candidate(x0, y0)
    scale = abs(reference) or 1.0
    deviation = max(
        abs(candidate(x, y) - reference)
        for x, y in zip(sample.xs.tolist(), sample.ys.tolist())
    )
    return deviation / scale


def implied_price(sample: CurveSample, x: float) -> float:
    """Returns the price ``-dy/dx`` implied by the sample at the given x,
    interpolating linearly between the finite-difference derivatives at the
    neighbouring sample points.

    Raises:
        OutOfRangeError: if x is outside the range covered by the sample
    """
    lo, hi = float(sample.xs[0]), float(sample.xs[-1])
    if not lo <= x <= hi:
        raise OutOfRangeError(f"x = {x!r} is outside the sample range [{lo!r}, {hi!r}]")
    return float(np.interp(x, sample.xs, sample.prices))
