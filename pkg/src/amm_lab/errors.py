from typing import Optional

__all__ = (
    "AMMError",
    "ConfigInvalidError",
    "DomainExitError",
    "EmptyReserveError",
    "FOutOfRangeError",
    "InvalidPoolError",
    "NonFiniteRuleError",
    "NonPositiveInputError",
    "NonPositiveXiError",
    "OutOfRangeError",
    "PoolExhaustedError",
    "SharesExceededError",
    "SupplyExceededError",
    "UnbalancedDepositError",
    "UnknownAssetError",
    "exit_code_for",
)


class AMMError(RuntimeError):
    """Base class for all domain errors raised by the library."""

    pass


class InvalidPoolError(AMMError):
    """Error thrown when a pool or token swap state violates its structural
    invariants (reserve count, weights, fee parameter and the like).
    """

    pass


class UnknownAssetError(AMMError):
    """Error thrown when an asset identifier is not part of a pool."""

    def __init__(self, asset: str, message: Optional[str] = None):
        message = message or f"unknown asset: {asset!r}"
        super().__init__(message)
        self.asset = asset


class EmptyReserveError(AMMError):
    """Error thrown when a price is requested from a reserve that is empty."""

    pass


class NonPositiveInputError(AMMError):
    """Error thrown when a trade or a conversion receives an amount that is
    not strictly positive (or negative where zero is accepted).
    """

    def __init__(self, amount: float, message: Optional[str] = None):
        message = message or f"amount must be positive, got {amount!r}"
        super().__init__(message)
        self.amount = amount


class PoolExhaustedError(AMMError):
    """Error thrown when a trade would take at least the entire reserve of
    the output asset.
    """

    def __init__(
        self, requested: float, available: float, message: Optional[str] = None
    ):
        message = (
            message
            or f"pool exhausted: requested {requested!r}, reserve is {available!r}"
        )
        super().__init__(message)
        self.requested = requested
        self.available = available


class SupplyExceededError(AMMError):
    """Error thrown when more intermediary tokens are burned than the
    outstanding supply permits.
    """

    pass


class DomainExitError(AMMError):
    """Error thrown when a trading curve leaves the positive quadrant during
    integration and the caller asked for a complete curve.
    """

    pass


class NonFiniteRuleError(AMMError):
    """Error thrown when a pricing rule evaluates to a non-finite or
    non-positive price.
    """

    pass


class OutOfRangeError(AMMError):
    """Error thrown when a curve sample is queried outside its x range."""

    pass


class FOutOfRangeError(AMMError):
    """Error thrown when a reserve fraction is outside its admissible range."""

    def __init__(self, f: float, message: Optional[str] = None):
        message = message or f"reserve fraction out of range: {f!r}"
        super().__init__(message)
        self.f = f


class NonPositiveXiError(AMMError):
    """Error thrown when the price ratio of an impermanent loss query is not
    strictly positive.
    """

    pass


class UnbalancedDepositError(AMMError):
    """Error thrown when a liquidity deposit is not proportional to the
    current reserves of the pool.
    """

    pass


class SharesExceededError(AMMError):
    """Error thrown when more LP shares are redeemed than outstanding."""

    pass


class ConfigInvalidError(AMMError):
    """Error thrown when a simulation configuration is malformed."""

    pass


def exit_code_for(exc: BaseException) -> int:
    """Returns the process exit code that the command line front end uses
    for the given exception.

    Parameters:
        exc: the exception that terminated a command

    Returns:
        1 for domain errors, 2 for everything that indicates a usage problem
        (bad arguments, missing or unparseable input files)
    """
    if isinstance(exc, AMMError):
        return 1
    return 2
