"""Event detection and wake-up scheduling for a line of acoustic sensors.

A sensor at distance d from the point of interest detects an event with
probability 1 inside its boundary radius, and otherwise with a Poisson
probability whose rate shrinks as the channel attenuation grows.  The
expected number of successful detections over a duty cycle aggregates the
per-sensor detection and wake-up probabilities; ``solve_p1`` searches the
sensor count that maximizes it subject to a wake-up budget.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .channel import ChannelParams, attenuation_db, attenuation_linear
from .errors import ConstraintError, DomainError

__all__ = [
    "SensorLayout",
    "WakeupParams",
    "P1Result",
    "poisson_pmf",
    "detection_probability",
    "wakeup_expectation",
    "solve_p1",
]


@dataclass(frozen=True)
class SensorLayout:
    """Per-sensor distances, boundary radii and detection efficiencies.

    All three sequences have one entry per sensor; sensor k (1-based) sits
    ``distances_m[k-1]`` meters from the point of interest.
    """

    distances_m: tuple
    boundary_m: tuple
    efficiencies: tuple

    def __post_init__(self):
        object.__setattr__(self, "distances_m", tuple(float(d) for d in self.distances_m))
        object.__setattr__(self, "boundary_m", tuple(float(b) for b in self.boundary_m))
        object.__setattr__(self, "efficiencies", tuple(float(e) for e in self.efficiencies))
        n = len(self.distances_m)
        if n == 0:
            raise DomainError("layout must contain at least one sensor")
        if len(self.boundary_m) != n or len(self.efficiencies) != n:
            raise DomainError("distances_m, boundary_m and efficiencies must have equal length")
        if any(d <= 0 for d in self.distances_m) or any(b <= 0 for b in self.boundary_m):
            raise DomainError("distances and boundary radii must be positive")
        if any(not 0.0 < e <= 1.0 for e in self.efficiencies):
            raise DomainError("efficiencies must lie in (0, 1]")

    def __len__(self):
        return len(self.distances_m)

    @classmethod
    def uniform(cls, k, d_min, d_max, boundary_m=5.0, efficiency=0.9):
        """k sensors equally spaced over [d_min, d_max] (a single sensor sits at d_min)."""
        if k < 1:
            raise DomainError("sensor count must be >= 1")
        if not 0 < d_min <= d_max:
            raise DomainError("need 0 < d_min <= d_max")
        distances = np.linspace(d_min, d_max, k)
        return cls(tuple(distances), (boundary_m,) * k, (efficiency,) * k)

    @classmethod
    def from_spacing(cls, k, spacing_m, boundary_m=5.0, efficiency=0.9):
        """k sensors at multiples of ``spacing_m``: spacing, 2*spacing, ..."""
        if k < 1:
            raise DomainError("sensor count must be >= 1")
        if spacing_m <= 0:
            raise DomainError("spacing_m must be positive")
        distances = spacing_m * np.arange(1, k + 1)
        return cls(tuple(distances), (boundary_m,) * k, (efficiency,) * k)


@dataclass(frozen=True)
class WakeupParams:
    """Wake-up probability, its budget cap, and the detection decay factor."""

    gamma_wake: float = 0.9
    gamma_cap: float = 1.0
    decay: float = 0.6

    def __post_init__(self):
        if not 0.0 <= self.gamma_wake <= 1.0 or not 0.0 <= self.gamma_cap <= 1.0:
            raise DomainError("gamma_wake and gamma_cap must lie in [0, 1]")
        if self.decay <= 0:
            raise DomainError("decay must be positive")


def poisson_pmf(k, rate):
    """Poisson probability mass exp(k*log(rate) - rate - log(k!)).

    Evaluated through log-gamma so large k does not overflow the factorial.
    ``k`` may be a scalar or integer array; ``rate`` must be positive.
    """
    karr = np.asarray(k)
    if np.any(karr < 0) or not np.issubdtype(karr.dtype, np.integer):
        raise DomainError("k must be a nonnegative integer")
    if np.any(np.asarray(rate) <= 0):
        raise DomainError("rate must be positive")
    logp = karr * np.log(rate) - np.asarray(rate) - gammaln(karr + 1.0)
    p = np.exp(logp)
    return float(p) if np.isscalar(k) and np.isscalar(rate) else p


def _detection_rate(distance_m, decay, channel, attenuation_scale):
    if attenuation_scale == "db":
        ab = attenuation_db(channel, distance_m)
    elif attenuation_scale == "linear":
        ab = attenuation_linear(channel, distance_m)
    else:
        raise DomainError(f"unknown attenuation_scale {attenuation_scale!r}")
    if np.any(np.asarray(ab) <= 0):
        raise DomainError("attenuation must be positive; increase a0_db or distance")
    return 1.0 / (decay * ab)


def detection_probability(k, distance_m, boundary_m, wakeup: WakeupParams,
                          channel: ChannelParams, attenuation_scale="db"):
    """Probability that sensor k detects an event at distance ``distance_m``.

    Inside the boundary radius detection is certain.  Outside, the
    probability is the Poisson mass at k with rate 1/(decay * attenuation),
    so it decays with both distance and sensor index.
    """
    if k < 1:
        raise DomainError("sensor index k starts at 1")
    if distance_m <= 0 or boundary_m <= 0:
        raise DomainError("distances must be positive")
    if distance_m < boundary_m:
        return 1.0
    y = _detection_rate(distance_m, wakeup.decay, channel, attenuation_scale)
    return poisson_pmf(int(k), y)


def _detection_vector(layout: SensorLayout, wakeup: WakeupParams,
                      channel: ChannelParams, attenuation_scale):
    """Pr(X=k) for k = 1..K, each at its own sensor's distance."""
    d = np.asarray(layout.distances_m)
    b = np.asarray(layout.boundary_m)
    k = np.arange(1, len(layout) + 1)
    pr = np.ones(len(layout))
    outside = d >= b
    if np.any(outside):
        y = _detection_rate(d[outside], wakeup.decay, channel, attenuation_scale)
        pr[outside] = poisson_pmf(k[outside], y)
    return pr


def wakeup_expectation(layout: SensorLayout, wakeup: WakeupParams,
                       channel: ChannelParams, attenuation_scale="db"):
    """Expected number of successful detections over one duty cycle.

    Sums (1 - (1 - gamma_wake*eps_k)^k) * Pr(X=k) over sensors k = 1..K.
    Zero wake-up probability gives exactly zero; the value never exceeds
    the number of sensors.
    """
    pr = _detection_vector(layout, wakeup, channel, attenuation_scale)
    k = np.arange(1, len(layout) + 1)
    eff = np.asarray(layout.efficiencies)
    awake = 1.0 - (1.0 - wakeup.gamma_wake * eff) ** k
    return float(np.sum(awake * pr))


@dataclass(frozen=True)
class P1Result:
    """Outcome of the active-sensor-count search."""

    k: int
    layout: SensorLayout
    expectation: float


def solve_p1(candidate_counts, wakeup: WakeupParams, channel: ChannelParams, *,
             spacing="uniform", d_min=None, d_max=None, distances=None,
             boundary_m=5.0, efficiency=0.9, attenuation_scale="db"):
    """Pick the sensor count (and implied spacing) that maximizes detection.

    ``candidate_counts`` is an iterable of sensor counts K to try.  With
    ``spacing="uniform"`` each K gets equal spacing over [d_min, d_max];
    with ``spacing="explicit"`` the first K entries of ``distances`` are
    used.  Ties go to the smaller K, then to the lexicographically smaller
    spacing.  Raises ConstraintError when the wake-up budget is violated.
    """
    if wakeup.gamma_wake > wakeup.gamma_cap:
        raise ConstraintError(
            f"gamma_wake={wakeup.gamma_wake} exceeds cap gamma={wakeup.gamma_cap}")
    counts = sorted(set(int(k) for k in candidate_counts))
    if not counts:
        raise DomainError("candidate count range is empty")
    if any(k < 1 for k in counts):
        raise DomainError("sensor counts must be >= 1")

    def build(k):
        if spacing == "uniform":
            if d_min is None or d_max is None:
                raise DomainError("uniform spacing needs d_min and d_max")
            return SensorLayout.uniform(k, d_min, d_max, boundary_m, efficiency)
        if spacing == "explicit":
            if distances is None or len(distances) < k:
                raise DomainError("explicit spacing needs >= K distances")
            return SensorLayout(tuple(distances[:k]), (boundary_m,) * k, (efficiency,) * k)
        raise DomainError(f"unknown spacing strategy {spacing!r}")

    best = None
    for k in counts:
        layout = build(k)
        e = wakeup_expectation(layout, wakeup, channel, attenuation_scale)
        if best is None or e > best.expectation or (
                e == best.expectation and k == best.k
                and layout.distances_m < best.layout.distances_m):
            # counts ascend, so strict > keeps the smallest K on ties; the
            # spacing comparison only breaks ties between equal-K layouts
            best = P1Result(k, layout, e)
    return best
