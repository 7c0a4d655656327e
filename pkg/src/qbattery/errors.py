"""Exception types shared by the engines and the CLI."""


class QBatteryError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(QBatteryError, ValueError):
    """Invalid parameters, configuration or preset (CLI exit code 1)."""


class NumericalError(QBatteryError, ArithmeticError):
    """An engine could not produce a trustworthy result (CLI exit code 2)."""
