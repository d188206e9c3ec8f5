"""Age-of-information analytics for the single-server FCFS update queue.

``aoi_violation`` is the stationary probability that the instantaneous age
of the freshest delivered update exceeds a threshold M, in closed form for
Poisson arrivals (rate lambda) and exponential service (rate mu).
``status_probability`` weighs how likely a delivered status still carries
the event information, and ``semantic_objective`` combines both with the
detection probability into the scalar objective the optimizer minimizes.
Every objective evaluation can be recorded into a ``ChuSpace``, the
bookkeeping triple relating violation values, sensing configurations and
evaluated objective values.
"""

import math
from dataclasses import dataclass, field

from .channel import ChannelParams
from .errors import AquaplanError, DomainError, SingularityError, StabilityError
from .sensing import SensorLayout, WakeupParams, detection_probability

__all__ = [
    "QueueParams",
    "ChuSpace",
    "aoi_violation",
    "status_probability",
    "semantic_objective",
]

_RATE_GAP = 1e-9
_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class QueueParams:
    """Arrival rate, service rate, and the age threshold M (time units)."""

    lam: float
    mu: float
    threshold_m: float

    def __post_init__(self):
        if self.lam <= 0 or self.mu <= 0:
            raise DomainError("rates must be positive")
        if self.threshold_m < 0:
            raise DomainError("threshold_m must be nonnegative")
        if self.lam >= self.mu:
            raise StabilityError(
                f"unstable queue: arrival rate {self.lam} >= service rate {self.mu}")
        if self.mu - self.lam <= _RATE_GAP:
            raise SingularityError(
                f"arrival and service rates within {_RATE_GAP}; closed form is singular")

    @property
    def load(self):
        return self.lam / self.mu


def aoi_violation(params: QueueParams):
    """Stationary probability that the age exceeds ``params.threshold_m``.

    Closed form:

        e^(-(mu-lam)M) + (mu/(lam-mu) - lam*M) e^(-mu*M) - mu/(lam-mu) e^(-lam*M)

    Exactly 1 at M=0 and decaying to 0 as M grows.  Values are clamped to
    [0, 1] only within 1e-12 of the bounds; any larger excursion means the
    evaluation went numerically wrong and raises.
    """
    lam, mu, m = params.lam, params.mu, params.threshold_m
    ratio = mu / (lam - mu)
    p = (math.exp(-(mu - lam) * m)
         + (ratio - lam * m) * math.exp(-mu * m)
         - ratio * math.exp(-lam * m))
    if p < -_CLAMP_TOL or p > 1.0 + _CLAMP_TOL:
        raise AquaplanError(f"violation probability {p} outside [0,1] beyond tolerance")
    return min(1.0, max(0.0, p))


def status_probability(lam, a_i):
    """Probability a delivered status still carries the event information.

    pi_s = x * e^(-x) with x = lam * a_i, hence bounded by 1/e.
    """
    if lam <= 0:
        raise DomainError("lam must be positive")
    if not 0.0 <= a_i <= 1.0:
        raise DomainError("a_i must be a probability")
    x = lam * a_i
    return x * math.exp(-x)


@dataclass
class ChuSpace:
    """Bookkeeping triple (violations, objective map, sensing configurations).

    ``configurations`` holds the distinct sensing configurations seen,
    ``violations`` the age-violation value of each evaluation, and
    ``mapping`` the objective value keyed by (configuration, lam).  All
    stored probabilities must be valid; the record call enforces it.
    """

    configurations: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    mapping: dict = field(default_factory=dict)

    def record(self, config_key, lam, a_i, r):
        if not 0.0 <= a_i <= 1.0:
            raise DomainError(f"violation value {a_i} outside [0, 1]")
        if not 0.0 <= r <= 1.0:
            raise DomainError(f"objective value {r} outside [0, 1]")
        if config_key not in self.configurations:
            self.configurations.append(config_key)
        self.violations.append(a_i)
        self.mapping[(config_key, lam)] = r

    def __len__(self):
        return len(self.mapping)


def semantic_objective(lam, queue: QueueParams, k, layout: SensorLayout,
                       wakeup: WakeupParams, channel: ChannelParams, *,
                       chu: ChuSpace = None, attenuation_scale="db"):
    """Objective r(lam) = status probability times detection probability.

    ``queue`` supplies mu and the age threshold; its arrival rate is
    replaced by ``lam``.  ``k`` selects the sensor whose distance enters
    the detection probability.  When ``chu`` is given the evaluation is
    appended to its mapping.
    """
    if not 1 <= k <= len(layout):
        raise DomainError(f"sensor index {k} outside layout of size {len(layout)}")
    q = QueueParams(lam, queue.mu, queue.threshold_m)
    a_i = aoi_violation(q)
    pi_s = status_probability(lam, a_i)
    pr = detection_probability(k, layout.distances_m[k - 1], layout.boundary_m[k - 1],
                               wakeup, channel, attenuation_scale)
    r = pi_s * pr
    if chu is not None:
        chu.record((layout.distances_m, k), lam, a_i, r)
    return r
