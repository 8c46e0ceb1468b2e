"""Exception hierarchy shared across the library.

The CLI maps these onto exit codes: parameter problems exit 2, impossible
heralding events exit 3, statistically empty Monte Carlo runs exit 4.
"""


class PhotonStatError(Exception):
    """Base class for all library errors."""


class ParameterError(PhotonStatError, ValueError):
    """A state, channel or simulation parameter is outside its domain."""


class ImpossibleEventError(PhotonStatError):
    """The conditioning event has zero probability (e.g. subtracting from vacuum)."""


class InsufficientStatisticsError(PhotonStatError):
    """A Monte Carlo run accepted zero samples.

    Carries the analytic conditional distribution so callers can still
    report the exact answer the simulation was estimating.
    """

    def __init__(self, message, exact_conditional=None, success_prob=None):
        super().__init__(message)
        self.exact_conditional = exact_conditional
        self.success_prob = success_prob


class SeriesDivergenceError(PhotonStatError):
    """A generating-function series does not converge at the requested argument."""


class ClosedFormDomainError(PhotonStatError):
    """A closed-form expression was evaluated at a pole or branch point."""


class ExtrapolationError(PhotonStatError):
    """Richardson extrapolation of a finite-difference derivative did not settle."""
