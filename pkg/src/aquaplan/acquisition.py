"""Acquisition functions for the minimization loop.

Expected improvement below a threshold c: with predictive mean m and
standard deviation s, EI(x) = (c - m) * Phi(z) + s * phi(z) where
z = (c - m) / s.  The plain variant keeps c pinned at the best value of
the initial design; the adaptive variant starts from the same threshold
and loosens it by omega * |prediction error| whenever the error at the
evaluated point exceeds a gate.  State is immutable: recalibration
returns a new state and never consumes randomness, so an adaptive run
with omega = 0 replays the plain run exactly.
"""

from dataclasses import dataclass, replace

import numpy as np
from scipy.special import ndtr

from .errors import DomainError, StateError

__all__ = [
    "expected_improvement",
    "adaptive_expected_improvement",
    "AcquisitionState",
    "initial_state",
    "recalibrate",
]

_SQRT_2PI = np.sqrt(2.0 * np.pi)


def expected_improvement(mean, std, threshold):
    """EI of a minimizer below ``threshold``; std == 0 collapses to the hinge."""
    mean = np.asarray(mean, dtype=float)
    std = np.asarray(std, dtype=float)
    if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(std))):
        raise DomainError("mean and std must be finite")
    if np.any(std < 0):
        raise DomainError("std must be >= 0")
    if not np.isfinite(threshold):
        raise DomainError("threshold must be finite")
    gap = threshold - mean
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(std > 0, gap / np.where(std > 0, std, 1.0), 0.0)
    dens = np.exp(-0.5 * z**2) / _SQRT_2PI
    ei = gap * ndtr(z) + std * dens
    return np.where(std > 0, ei, np.maximum(gap, 0.0))


@dataclass(frozen=True)
class AcquisitionState:
    """Threshold bookkeeping for the adaptive variant.

    history rows are (predicted, actual, delta) triples; appended on
    every recalibration whether or not the threshold moved.
    """

    threshold: float
    omega: float
    delta_gate: float
    history: tuple = ()

    def __post_init__(self):
        if not np.isfinite(self.threshold):
            raise StateError("threshold must be finite")
        if self.omega < 0:
            raise DomainError("omega must be >= 0")
        if self.delta_gate < 0:
            raise DomainError("delta_gate must be >= 0")


def initial_state(best_initial, omega=0.1, gate_fraction=0.05):
    """State anchored at the best initial-design value; gate scales with it."""
    return AcquisitionState(threshold=float(best_initial), omega=float(omega),
                            delta_gate=gate_fraction * abs(float(best_initial)))


def adaptive_expected_improvement(mean, std, state: AcquisitionState):
    """EI evaluated at the state's current threshold."""
    return expected_improvement(mean, std, state.threshold)


def recalibrate(state: AcquisitionState, predicted, actual):
    """Fold one (prediction, observation) pair into the threshold.

    delta = |predicted - actual|; the threshold moves by omega * delta
    only when delta exceeds the gate.  Pure function of its arguments.
    """
    if not (np.isfinite(predicted) and np.isfinite(actual)):
        raise DomainError("predicted and actual must be finite")
    delta = abs(float(predicted) - float(actual))
    if delta > state.delta_gate:
        threshold = state.threshold + state.omega * delta
    else:
        threshold = state.threshold
    row = (float(predicted), float(actual), delta)
    return replace(state, threshold=threshold, history=state.history + (row,))
