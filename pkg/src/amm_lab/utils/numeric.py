"""Small numeric helpers shared by the engines."""

from typing import Iterable

__all__ = ("relative_error", "sums_to_one")

#: Tolerance used when checking that weights or reserve ratios sum to one
WEIGHT_SUM_TOLERANCE = 1e-12


def relative_error(actual: float, expected: float) -> float:
    """Returns the relative deviation of ``actual`` from ``expected``; falls
    back to the absolute deviation when ``expected`` is zero.
    """
    diff = abs(actual - expected)
    return diff / abs(expected) if expected else diff


def sums_to_one(values: Iterable[float], tol: float = WEIGHT_SUM_TOLERANCE) -> bool:
    """Returns whether the given values sum to one within the tolerance."""
    return abs(sum(values) - 1.0) <= tol
