"""Exception types shared across the package."""


class RMWaveError(Exception):
    """Base class for all package errors."""


class DomainError(RMWaveError, ValueError):
    """Arguments fall outside the domain where a quantity is defined."""


class IntegrationError(RMWaveError, ArithmeticError):
    """The ODE integrator could not finish."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class StepBudgetExhausted(IntegrationError):
    pass


class StepUnderflow(IntegrationError):
    pass


class NonFiniteState(IntegrationError):
    pass


class NoCrossing(RMWaveError):
    """An orbit never reached the ignition line within the horizon."""


class ProfileUndefined(RMWaveError):
    pass


class InsufficientRange(RMWaveError):
    pass


class BracketFailure(RMWaveError):
    pass


class NoInteriorMinimum(RMWaveError):
    pass


class PoleError(RMWaveError, ValueError):
    pass


class NoConvergence(RMWaveError, ArithmeticError):
    pass


class EnvelopeError(RMWaveError, ValueError):
    pass


class NoRootInEnvelope(RMWaveError):
    pass


class Diverged(RMWaveError):
    """A curve root exceeds the configured cap (the curve blows up)."""
