"""Trading curves of the constant-function pool families.

Importing this package registers every built-in curve.
"""

from .base import Curve
from .mean import ConstantMeanCurve
from .product import ConstantProductCurve
from .registry import CurveRegistry, find, register
from .sum import ConstantSumCurve

__all__ = (
    "ConstantMeanCurve",
    "ConstantProductCurve",
    "ConstantSumCurve",
    "Curve",
    "CurveRegistry",
    "find",
    "register",
)
