"""Exception hierarchy shared by the library and the CLI."""


class FeasimapError(Exception):
    """Base class for all feasimap errors."""


class InputError(FeasimapError, ValueError):
    """Invalid argument: wrong shape, out of bounds, non-finite, unknown id."""


class ConfigError(InputError):
    """Invalid campaign configuration."""


class NumericalError(FeasimapError, ArithmeticError):
    """A factorisation or optimisation could not be completed."""


class BudgetError(FeasimapError, RuntimeError):
    """An expensive evaluation was requested beyond the ledger's cap."""
