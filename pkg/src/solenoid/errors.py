"""Exception types shared across the package."""


class SolenoidError(Exception):
    """Base class for all errors raised by this package."""


class SingularMatrix(SolenoidError, ValueError):
    pass


class NonSquare(SolenoidError, ValueError):
    pass


class SizeMismatch(SolenoidError, ValueError):
    pass


class ShapeMismatch(SizeMismatch):
    pass


class ZeroInput(SolenoidError, ValueError):
    pass


class ZeroScale(ZeroInput):
    pass


class SourceTargetMismatch(SolenoidError, ValueError):
    pass


class NotProperMultiplier(SolenoidError, ValueError):
    pass


class MissingSpecs(SolenoidError, ValueError):
    pass


class NotProperlyArranged(SolenoidError, ValueError):
    pass


class BasisMismatch(SolenoidError, ValueError):
    pass


class NotIrrational(SolenoidError, ValueError):
    pass


class BudgetExhausted(SolenoidError, RuntimeError):
    def __init__(self, message, effort=None, best=None):
        super().__init__(message)
        self.effort = effort
        self.best = best


class NotRelativelyPrime(SolenoidError, ValueError):
    def __init__(self, message, generator=None, index=None):
        super().__init__(message)
        self.generator = generator
        self.index = index


class RoundtripFailure(SolenoidError, RuntimeError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class InvariantBreach(SolenoidError, AssertionError):
    """An internal consistency check failed; indicates a bug, not bad input."""
