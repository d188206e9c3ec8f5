"""Exception hierarchy shared by all aquaplan modules."""


class AquaplanError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(AquaplanError, ValueError):
    """An argument is outside the domain an operation is defined on."""


class ConstraintError(DomainError):
    """An optimization constraint is violated (e.g. wake-up cap exceeded)."""


class StabilityError(DomainError):
    """Queue is unstable: arrival rate is not strictly below the service rate."""


class SingularityError(DomainError):
    """Arrival and service rate are too close; the closed form is singular."""


class FitError(AquaplanError):
    """A surrogate model could not be fitted (non-PD kernel, duplicates...)."""


class StateError(AquaplanError):
    """An operation was called on a model in the wrong state (e.g. unfitted)."""


class TrainingError(AquaplanError):
    """Neural-network training diverged (non-finite loss)."""


class EvaluationAbort(AquaplanError):
    """Objective evaluation failed inside an optimization loop.

    The partial trace accumulated up to the failure is attached as
    ``trace`` so callers can inspect what was already evaluated.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
