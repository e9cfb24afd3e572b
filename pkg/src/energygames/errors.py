"""Exception hierarchy shared by all solver modules."""


class EnergyGameError(Exception):
    """Base class for every error raised by this package."""


class InputError(EnergyGameError):
    """Malformed game description or invalid arguments."""


class BudgetExceeded(EnergyGameError):
    """An enumeration or arena would exceed its configured budget."""


class FalsificationError(EnergyGameError):
    """A runtime check that the theory guarantees has failed.

    Raised when a bound, a well-definedness claim, or an alternatives
    branch does not hold. Either the input violates a precondition or
    there is a bug; in both cases the run must not be trusted.
    """


class UndefinedState(EnergyGameError):
    """A strategy was queried outside of its domain."""


class InconsistentObservation(EnergyGameError):
    """A strategy observed a move that does not extend its memory."""
