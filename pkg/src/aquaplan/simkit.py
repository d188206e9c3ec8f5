"""Discrete-event simulation of the update pipeline.

Two experiments live here: a Monte Carlo M/M/1 FCFS queue that tracks the
age sawtooth (the independent check for the closed-form violation
probability in :mod:`aquaplan.aoi`), and an end-to-end delay comparison of
sensor placement strategies where each delivered update pays acoustic
propagation plus queueing system time.

The queue is simulated exactly: with arrival times A_i and service times
S_i, FCFS departures satisfy D_i = S_i + max(A_i, D_{i-1}), which unrolls
to the prefix maximum D_i = CS_i + max_{j<=i}(A_j - CS_{j-1}) over the
service-time cumulative sum CS.  That makes the whole path one vectorized
pass instead of an event loop.
"""

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .aoi import QueueParams
from .channel import ChannelParams
from .errors import DomainError
from .sensing import SensorLayout, WakeupParams

__all__ = [
    "ScenarioConfig",
    "AoiSample",
    "DelaySeries",
    "simulate_mm1_aoi",
    "simulate_delay_comparison",
    "horizon_for_departures",
]


@dataclass(frozen=True)
class ScenarioConfig:
    """Topology and horizon of a multi-subnet simulation scenario."""

    subnets: int = 3
    nodes_per_subnet: int = 8
    sound_speed_mps: float = 1500.0
    sim_horizon: float = 2000.0
    seed: int = 0

    def __post_init__(self):
        if self.subnets < 1 or self.nodes_per_subnet < 1:
            raise DomainError("subnets and nodes_per_subnet must be >= 1")
        if self.sim_horizon <= 0:
            raise DomainError("sim_horizon must be positive")
        if self.sound_speed_mps <= 0:
            raise DomainError("sound_speed_mps must be positive")


def _mm1_paths(lam, mu, horizon, rng):
    """Arrival and departure instants of an FCFS M/M/1 path on [0, horizon]."""
    n = int(lam * horizon + 6.0 * np.sqrt(lam * horizon) + 64)
    gaps = rng.exponential(1.0 / lam, size=n)
    arrivals = np.cumsum(gaps)
    while arrivals[-1] <= horizon:
        gaps = rng.exponential(1.0 / lam, size=n)
        arrivals = np.concatenate([arrivals, arrivals[-1] + np.cumsum(gaps)])
    arrivals = arrivals[arrivals <= horizon]
    services = rng.exponential(1.0 / mu, size=arrivals.size)
    cs = np.cumsum(services)
    shifted = np.concatenate(([0.0], cs[:-1]))
    departures = cs + np.maximum.accumulate(arrivals - shifted)
    return arrivals, departures


@dataclass
class AoiSample:
    """One simulated age path and its violation statistics.

    The age grows with unit slope and drops at each reception (departure
    from the queue) to reception_time - generation_time; peak_ages holds
    the value just before each drop, reset_ages the value just after.
    """

    threshold_m: float
    horizon: float
    warmup_time: float
    departure_times: np.ndarray
    generation_times: np.ndarray
    violation_fraction: float
    n_departures: int
    mean_system_time: float
    peak_ages: np.ndarray = field(repr=False, default=None)
    reset_ages: np.ndarray = field(repr=False, default=None)

    def age_series(self):
        """Sawtooth breakpoints (t, age) suitable for line plotting."""
        t = np.repeat(self.departure_times, 2)
        ages = np.empty_like(t)
        ages[0::2] = self.peak_ages
        ages[1::2] = self.reset_ages
        return np.concatenate(([0.0], t)), np.concatenate(([0.0], ages))


def simulate_mm1_aoi(queue: QueueParams, horizon, seed, warmup_fraction=0.1):
    """Simulate the FCFS M/M/1 age process and measure threshold violations.

    Returns the fraction of [warmup, horizon] during which the
    instantaneous age exceeded ``queue.threshold_m``.  The first
    ``warmup_fraction`` of the horizon is discarded so the empty-system
    start does not bias the estimate.  Deterministic per seed.
    """
    if horizon <= 0:
        raise DomainError("horizon must be positive")
    if not 0.0 <= warmup_fraction < 1.0:
        raise DomainError("warmup_fraction must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    arrivals, departures = _mm1_paths(queue.lam, queue.mu, horizon, rng)

    received = departures <= horizon
    gen = arrivals[received]
    rec = departures[received]

    # segment i spans [seg_start_i, seg_end_i) with age t - ref_i
    seg_start = np.concatenate(([0.0], rec))
    seg_end = np.concatenate((rec, [horizon]))
    refs = np.concatenate(([0.0], gen))

    warmup = warmup_fraction * horizon
    s = np.maximum(seg_start, warmup)
    e = np.minimum(seg_end, horizon)
    viol = np.maximum(0.0, e - np.maximum(s, refs + queue.threshold_m))
    viol_time = float(np.sum(viol[e > s]))
    fraction = viol_time / (horizon - warmup)

    prev_ref = np.concatenate(([0.0], gen[:-1]))
    peaks = rec - prev_ref
    resets = rec - gen

    in_window = rec > warmup
    n_dep = int(np.count_nonzero(in_window))
    mean_sys = float(np.mean(resets[in_window])) if n_dep else float("nan")

    return AoiSample(
        threshold_m=queue.threshold_m,
        horizon=float(horizon),
        warmup_time=warmup,
        departure_times=rec,
        generation_times=gen,
        violation_fraction=fraction,
        n_departures=n_dep,
        mean_system_time=mean_sys,
        peak_ages=peaks,
        reset_ages=resets,
    )


def horizon_for_departures(queue: QueueParams, n_departures, warmup_fraction=0.1):
    """Horizon long enough to see about ``n_departures`` past the warm-up."""
    if n_departures < 1:
        raise DomainError("n_departures must be >= 1")
    return 1.02 * n_departures / queue.lam / (1.0 - warmup_fraction)


@dataclass
class DelaySeries:
    """End-to-end delays of one placement strategy across all subnets."""

    strategy: str
    subnet_ids: np.ndarray
    times: np.ndarray
    delays: np.ndarray

    @property
    def mean_delay(self):
        return float(np.mean(self.delays))


def _strategy_layouts(strategy, scenario, queue, wakeup, channel,
                      d_bounds, k_bounds, bo_config):
    """Per-subnet sensor distance arrays for one strategy."""
    lo, hi = d_bounds
    k_cap = min(k_bounds[1], scenario.nodes_per_subnet)
    if strategy == "optimized":
        from .optimizer import BoConfig, placement_objective, optimize_placement

        cfg = bo_config
        if cfg is None:
            cfg = BoConfig(bounds=((k_bounds[0], k_cap), (lo, hi)),
                           seed=scenario.seed, integer_dims=(0,))
        objective = placement_objective(wakeup, channel,
                                        boundary_m=lo if lo < 5.0 else 5.0)
        trace = optimize_placement(objective, cfg)
        k_star, spacing = int(trace.best_x[0]), float(trace.best_x[1])
        distances = spacing * np.arange(1, k_star + 1)
        return [distances for _ in range(scenario.subnets)]
    if strategy == "random":
        layouts = []
        for s in range(scenario.subnets):
            rng = np.random.default_rng((scenario.seed, 3000 + s))
            layouts.append(rng.uniform(lo, hi, size=scenario.nodes_per_subnet))
        return layouts
    if strategy == "fixed":
        k = min(2, scenario.nodes_per_subnet)
        distances = np.linspace(lo, hi, k) if k > 1 else np.array([lo])
        return [distances for _ in range(scenario.subnets)]
    raise DomainError(f"unknown strategy {strategy!r}")


def simulate_delay_comparison(scenario: ScenarioConfig, strategies, queue: QueueParams,
                              wakeup: WakeupParams, channel: ChannelParams, *,
                              d_bounds=(2.0, 40.0), k_bounds=(1, 50),
                              bo_config=None, threads=1):
    """Per-update end-to-end delay series for each placement strategy.

    Delay of update j = propagation (sensor distance / sound speed) plus
    M/M/1 system time.  The queue path is shared across strategies within
    a subnet (common random numbers), so differences reflect placement
    only.  A strategy whose placement fails is skipped with a warning.
    """
    if not strategies:
        raise DomainError("strategies must be nonempty")
    c = scenario.sound_speed_mps

    queue_paths = []

    def _subnet_path(s):
        rng = np.random.default_rng((scenario.seed, 1000 + s))
        arrivals, departures = _mm1_paths(queue.lam, queue.mu, scenario.sim_horizon, rng)
        received = departures <= scenario.sim_horizon
        return departures[received], (departures - arrivals)[received]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            queue_paths = list(ex.map(_subnet_path, range(scenario.subnets)))
    else:
        queue_paths = [_subnet_path(s) for s in range(scenario.subnets)]

    results = {}
    for si, strategy in enumerate(strategies):
        try:
            layouts = _strategy_layouts(strategy, scenario, queue, wakeup,
                                        channel, d_bounds, k_bounds, bo_config)
        except Exception as exc:  # placement failure skips the strategy
            warnings.warn(f"strategy {strategy!r} skipped: {exc}")
            continue
        subnet_ids, times, delays = [], [], []
        for s in range(scenario.subnets):
            rec, sys_times = queue_paths[s]
            rng = np.random.default_rng((scenario.seed, 2000 + s, si))
            dist = rng.choice(layouts[s], size=rec.size)
            subnet_ids.append(np.full(rec.size, s))
            times.append(rec)
            delays.append(sys_times + dist / c)
        results[strategy] = DelaySeries(
            strategy=strategy,
            subnet_ids=np.concatenate(subnet_ids),
            times=np.concatenate(times),
            delays=np.concatenate(delays),
        )
    return results
