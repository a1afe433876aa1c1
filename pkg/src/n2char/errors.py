"""Exception types raised by the character and decomposition machinery."""


class N2CharError(Exception):
    """Base class for all errors raised by this package."""


class StabilizationError(N2CharError, RuntimeError):
    """The theta-type sum over j did not settle within the allowed window doublings."""


class CentralChargeMismatch(N2CharError, ValueError):
    """Target and factor central charges do not agree, so no conformal embedding exists."""


class DecompositionFailure(N2CharError, ArithmeticError):
    """Greedy subtraction hit a negative or fractional multiplicity, or left a remainder."""


class LevelCapExceeded(N2CharError, ValueError):
    """A Gram computation was requested above the default level cap."""
