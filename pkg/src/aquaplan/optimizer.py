"""Surrogate-assisted optimization loop.

The core loop minimizes a black-box objective over a box: a seeded
uniform initial design, then one batch of fresh uniform candidates per
iteration scored by expected improvement on a surrogate fit to all
observations so far.  The plain acquisition keeps its improvement
threshold pinned at the best initial-design value; the adaptive one
starts from the same anchor and recalibrates after every evaluation.
Both consume the random stream identically, so with omega = 0 the two
variants produce bitwise-identical traces.

``optimize_rate`` minimizes; ``optimize_placement`` maximizes by
negating and flips the trace back so its rows read in maximize sense.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .acquisition import expected_improvement, initial_state, recalibrate
from .aoi import semantic_objective
from .errors import DomainError, EvaluationAbort
from .sensing import SensorLayout, wakeup_expectation
from .surrogate import gp_fit, mlp_fit

__all__ = [
    "BoConfig",
    "TraceRow",
    "BoTrace",
    "optimize_rate",
    "optimize_placement",
    "compare_acquisitions",
    "iterations_to_target",
    "evals_to_own_best",
    "rate_objective",
    "placement_objective",
    "round_half_down",
]


def round_half_down(value):
    """Nearest integer, halves toward minus infinity: 2.5 -> 2, 2.51 -> 3."""
    return int(math.ceil(float(value) - 0.5))


@dataclass(frozen=True)
class BoConfig:
    """Loop settings; bounds is a (lo, hi) pair per dimension."""

    bounds: tuple
    seed: int = 0
    n_init: int = 10
    n_iter: int = 40
    batch: int = 100
    acquisition: str = "ei"
    omega: float = 0.1
    gate_fraction: float = 0.05
    surrogate: str = "gp"
    noise_var: float = 1e-6
    integer_dims: tuple = ()
    drift_every: int = 0
    drift_tolerance: float = 0.05

    def __post_init__(self):
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "integer_dims", tuple(int(d) for d in self.integer_dims))
        if not bounds:
            raise DomainError("bounds must be nonempty")
        for i, (lo, hi) in enumerate(bounds):
            if i in self.integer_dims:
                if round_half_down(lo) > round_half_down(hi):
                    raise DomainError(f"integer bound {i} is empty")
            elif not lo <= hi:  # lo == hi is the degenerate single-point box
                raise DomainError(f"bound {i} must satisfy lo <= hi")
        if any(d < 0 or d >= len(bounds) for d in self.integer_dims):
            raise DomainError("integer_dims index out of range")
        if self.n_init < 1 or self.n_iter < 1 or self.batch < 1:
            raise DomainError("n_init >= 1, n_iter >= 1, batch >= 1 required")
        if self.acquisition not in ("ei", "aei"):
            raise DomainError(f"unknown acquisition {self.acquisition!r}")
        if self.surrogate not in ("gp", "mlp"):
            raise DomainError(f"unknown surrogate {self.surrogate!r}")
        if self.omega < 0 or self.gate_fraction < 0:
            raise DomainError("omega and gate_fraction must be >= 0")
        if self.drift_every < 0 or self.drift_tolerance < 0:
            raise DomainError("drift settings must be >= 0")


@dataclass(frozen=True)
class TraceRow:
    index: int
    phase: str  # init | bo | drift
    x: tuple
    observed: float
    best: float
    threshold: float


@dataclass
class BoTrace:
    """Evaluation history; best_y is in the caller's sense (min or max)."""

    rows: list = field(default_factory=list)
    config: BoConfig = None
    best_x: tuple = None
    best_y: float = None

    @property
    def n_evals(self):
        return len(self.rows)


def _draw(rng, config, n):
    """n uniform points; integer dims drawn on the integer lattice."""
    cols = []
    for i, (lo, hi) in enumerate(config.bounds):
        if i in config.integer_dims:
            a, b = round_half_down(lo), round_half_down(hi)
            cols.append(rng.integers(a, b + 1, size=n).astype(float))
        else:
            cols.append(rng.uniform(lo, hi, size=n))
    return np.column_stack(cols)


def _normalize(x, config):
    lo = np.array([b[0] for b in config.bounds])
    width = np.array([max(b[1] - b[0], 1.0e-300) for b in config.bounds])
    return (x - lo) / width


def _fit(config, x_norm, y, iteration):
    if config.surrogate == "gp":
        return gp_fit(x_norm, y, noise_var=config.noise_var)
    fit_seed = (config.seed * 1_000_003 + iteration) % 2**32
    return mlp_fit(x_norm, y, seed=fit_seed)


def _evaluate(objective, x, trace):
    try:
        value = float(objective(x))
    except EvaluationAbort:
        raise
    except Exception as exc:
        raise EvaluationAbort(f"objective failed at {tuple(x)}: {exc}",
                              trace=trace) from exc
    if not np.isfinite(value):
        raise EvaluationAbort(f"objective returned {value} at {tuple(x)}",
                              trace=trace)
    return value


def optimize_rate(objective, config: BoConfig):
    """Minimize ``objective`` over the configured box; returns the trace."""
    rng = np.random.default_rng(config.seed)
    trace = BoTrace(config=config)
    xs, ys = [], []

    design = _draw(rng, config, config.n_init)
    best = math.inf
    best_x = None
    for row in design:
        y = _evaluate(objective, row, trace)
        xs.append(row)
        ys.append(y)
        if y < best:
            best, best_x = y, tuple(row)
        trace.rows.append(TraceRow(len(trace.rows), "init", tuple(row), y, best,
                                   math.nan))

    anchor = best  # improvement threshold, pinned for the plain acquisition
    state = initial_state(best, omega=config.omega,
                          gate_fraction=config.gate_fraction)
    adaptive = config.acquisition == "aei"
    # backfill the anchor into the init rows so the threshold column is complete
    trace.rows = [replace(r, threshold=anchor) for r in trace.rows]

    for t in range(1, config.n_iter + 1):
        cand = _draw(rng, config, config.batch)
        model = _fit(config, _normalize(np.array(xs), config), np.array(ys), t)
        mean, var = model.predict(_normalize(cand, config))
        std = np.sqrt(var)
        threshold = state.threshold if adaptive else anchor
        ei = expected_improvement(mean, std, threshold)
        pick = int(np.argmax(ei))  # ties resolve to the lowest index
        x_sel = cand[pick]
        y_sel = _evaluate(objective, x_sel, trace)
        xs.append(x_sel)
        ys.append(y_sel)
        if y_sel < best:
            best, best_x = y_sel, tuple(x_sel)
        if adaptive:
            state = recalibrate(state, float(mean[pick]), y_sel)
        trace.rows.append(TraceRow(len(trace.rows), "bo", tuple(x_sel), y_sel,
                                   best, threshold))

        if config.drift_every and t % config.drift_every == 0:
            y_re = _evaluate(objective, np.array(best_x), trace)
            xs.append(np.array(best_x))
            ys.append(y_re)
            shift = abs(y_re - best) / max(abs(best), 1e-12)
            if shift > config.drift_tolerance:
                best = y_re
                anchor = y_re
                state = replace(state, threshold=y_re)
            trace.rows.append(TraceRow(len(trace.rows), "drift", best_x, y_re,
                                       best, state.threshold if adaptive else anchor))

    trace.best_x, trace.best_y = best_x, best
    return trace


def _flip(trace: BoTrace):
    rows = [replace(r, observed=-r.observed, best=-r.best, threshold=-r.threshold)
            for r in trace.rows]
    return BoTrace(rows=rows, config=trace.config, best_x=trace.best_x,
                   best_y=None if trace.best_y is None else -trace.best_y)


def optimize_placement(objective, config: BoConfig):
    """Maximize ``objective`` (e.g. expected wake-ups) over the box."""
    try:
        trace = optimize_rate(lambda x: -objective(x), config)
    except EvaluationAbort as exc:
        raise EvaluationAbort(str(exc), trace=_flip(exc.trace)) from exc
    return _flip(trace)


def iterations_to_target(trace: BoTrace, target, tol=0.0, sense="min"):
    """Index of the first row whose running best reaches the target.

    Returns ``trace.n_evals`` when the target is never reached.
    """
    for row in trace.rows:
        hit = row.best <= target + tol if sense == "min" else row.best >= target - tol
        if hit:
            return row.index
    return trace.n_evals


def evals_to_own_best(trace: BoTrace, fraction=0.01):
    """First row index whose best is within ``fraction`` of the final best."""
    tol = fraction * abs(trace.best_y)
    return iterations_to_target(trace, trace.best_y, tol)


_VARIANTS = {"ei": ("ei", "gp"), "aei": ("aei", "gp"), "aei_mlp": ("aei", "mlp")}


def compare_acquisitions(objective, config: BoConfig, seeds, fraction=0.01):
    """Per-seed evaluations-to-within-1%-of-final-best for each variant.

    Variants: plain EI on a GP, adaptive EI on a GP, adaptive EI on the
    dropout network.  Seeds are independent, so permuting them permutes
    the per-seed results and nothing else.
    """
    if len(seeds) < 5:
        raise DomainError("need at least 5 seeds")
    out = {}
    for name, (acq, surrogate) in _VARIANTS.items():
        evals, best, traces = [], [], []
        for seed in seeds:
            cfg = replace(config, seed=int(seed), acquisition=acq,
                          surrogate=surrogate)
            trace = optimize_rate(objective, cfg)
            evals.append(evals_to_own_best(trace, fraction))
            best.append(trace.best_y)
            traces.append(trace)
        out[name] = {"evals": np.array(evals), "best": np.array(best),
                     "traces": traces}
    return out


def rate_objective(queue, k, layout, wakeup, channel, *, chu=None,
                   attenuation_scale="db"):
    """Negated semantic-value rate r(lam); minimizing it maximizes r.

    Callers must keep the search bounds inside (0, 0.99 * mu); the queue
    rejects lam >= mu outright.
    """
    def f(x):
        lam = float(np.atleast_1d(x)[0])
        return -semantic_objective(lam, queue, k, layout, wakeup, channel,
                                   chu=chu, attenuation_scale=attenuation_scale)
    return f


def placement_objective(wakeup, channel, *, boundary_m=5.0, efficiency=0.9,
                        attenuation_scale="db"):
    """Expected wake-ups of a (count, spacing) layout, for maximization."""
    def f(x):
        x = np.atleast_1d(x)
        k = round_half_down(x[0])
        spacing = float(x[1])
        layout = SensorLayout.from_spacing(k, spacing, boundary_m=boundary_m,
                                           efficiency=efficiency)
        return wakeup_expectation(layout, wakeup, channel,
                                  attenuation_scale=attenuation_scale)
    return f
