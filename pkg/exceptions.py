"""Error types raised by the simulation library.

Library code raises these and never prints; the CLI maps
``ConfigurationError`` to exit code 2 and every other ``DtcError`` to 1.
"""


class DtcError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(DtcError):
    """Invalid parameters, integrator settings, axis specs or config files."""


class DivergenceError(DtcError):
    """A Runge-Kutta stage produced a non-finite value."""

    def __init__(self, component, t=None):
        self.component = component
        self.t = t
        where = f' at t={t:.6g}' if t is not None else ''
        super().__init__(f'non-finite value in component {component}{where}')


class ValidityError(DtcError):
    """Oscillator state left the Holstein-Primakoff validity region (|beta|^2 > 1)."""


class PoleError(DtcError):
    """Closed-form expression evaluated at its pole."""


class NotApplicableError(DtcError):
    """Analytic solution requested outside the regime where it holds."""


class InsufficientDataError(DtcError):
    """Not enough signal (e.g. envelope maxima) for a statistic."""


class TrajectoryMismatchError(DtcError):
    """Two trajectories that must share sampling do not."""


class StorageError(DtcError):
    """Malformed trajectory or phase-diagram file."""
