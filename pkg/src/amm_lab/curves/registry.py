from amm_lab.types import PoolKind
from amm_lab.utils.registry import Registry

from .base import Curve

__all__ = ("CurveRegistry", "find", "register")


#: Mapping that maps pool kinds to the corresponding curve instances
CurveRegistry: Registry[PoolKind, Curve] = Registry("curve")

find = CurveRegistry.find
"""Returns the registered curve corresponding to the given pool kind.

Parameters:
    kind: the pool kind to look up

Raises:
    KeyError: if there is no registered curve for the given kind

Returns:
    the curve instance registered for the kind
"""


def register(kind: PoolKind):
    """Class decorator factory that returns a decorator that instantiates a
    Curve_ subclass and registers the instance for the given pool kind.

    Parameters:
        kind: the pool kind that the curve implements

    Returns:
        an appropriate decorator that can then be applied to a Curve_
        subclass
    """

    def decorator(cls):
        cls.kind = kind
        CurveRegistry.register(kind, cls())
        return cls

    return decorator
