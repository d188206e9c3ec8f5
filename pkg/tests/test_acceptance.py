"""Release acceptance suite.

Eleven checks gate a release, each mixing an analytic identity with an
independent oracle (Monte Carlo simulation, exhaustive grid search, or a
byte-level replay).  Every check prints a single PASS/FAIL line with its
measured quantities; thresholds and budgets are stated in each test.
"""

import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from aquaplan import (
    BoConfig,
    ChannelParams,
    QueueParams,
    ScenarioConfig,
    SensorLayout,
    WakeupParams,
    aoi_violation,
    evals_to_own_best,
    expected_improvement,
    gp_fit,
    gp_predict,
    horizon_for_departures,
    iterations_to_target,
    optimize_placement,
    optimize_rate,
    placement_objective,
    rate_objective,
    simulate_delay_comparison,
    simulate_mm1_aoi,
    wakeup_expectation,
)
from aquaplan.cli import main as cli_main
from aquaplan.sensing import poisson_pmf

CHANNEL = ChannelParams(0.0, 1.5, 10.0)
WAKEUP = WakeupParams(gamma_wake=0.9, gamma_cap=1.0, decay=0.6)


def _report(num, ok, detail):
    print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_01_closed_form_matches_simulation():
    """Violation closed form vs simulated fraction, within 0.02 absolute.

    Four (lam, mu, M) fixtures, each simulated long enough for at least
    1e5 post-warm-up deliveries; whole check budgeted under 60 s.
    """
    cases = [(0.8, 1.0, 2.0), (0.8, 1.0, 5.0), (0.5, 1.0, 5.0),
             (0.3, 0.5, 10.0)]
    t0 = time.time()
    worst = 0.0
    min_departures = None
    for lam, mu, m in cases:
        queue = QueueParams(lam, mu, m)
        horizon = horizon_for_departures(queue, 100_000)
        sample = simulate_mm1_aoi(queue, horizon, seed=0)
        assert sample.n_departures >= 100_000
        min_departures = (sample.n_departures if min_departures is None
                          else min(min_departures, sample.n_departures))
        worst = max(worst, abs(sample.violation_fraction - aoi_violation(queue)))
    elapsed = time.time() - t0
    _report(1, worst <= 0.02 and elapsed < 60.0,
            f"max |closed - simulated| = {worst:.4f} (tol 0.02), "
            f">= {min_departures} departures/case, {elapsed:.1f}s (< 60s)")


def test_criterion_02_boundary_identities():
    """Exact value 1 at M=0, vanishing tail at M=50, monotone in M."""
    at_zero = aoi_violation(QueueParams(0.8, 1.0, 0.0))
    at_fifty = aoi_violation(QueueParams(0.8, 1.0, 50.0))
    rng = np.random.default_rng(2024)
    ms = np.linspace(0.0, 30.0, 100)
    monotone = True
    for _ in range(50):
        mu = float(rng.uniform(0.2, 3.0))
        lam = float(rng.uniform(0.05, 0.95)) * mu
        vals = [aoi_violation(QueueParams(lam, mu, m)) for m in ms]
        monotone &= all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))
    ok = abs(at_zero - 1.0) <= 1e-9 and at_fifty < 1e-3 and monotone
    _report(2, ok, f"M=0 -> {at_zero}, M=50 -> {at_fifty:.3e} (< 1e-3), "
                   f"monotone on 50 random stable pairs: {monotone}")


def test_criterion_03_detection_kernel_normalization():
    """Poisson masses k = 0..60 sum to >= 1 - 1e-9 for 100 rates in (0, 20]."""
    rng = np.random.default_rng(7)
    k = np.arange(0, 61)
    totals = [float(np.sum(poisson_pmf(k, y)))
              for y in rng.uniform(1e-9, 20.0, size=100)]
    worst = min(totals)
    _report(3, worst >= 1.0 - 1e-9,
            f"min sum over 100 rates = {worst:.12f} (>= 1 - 1e-9)")


def test_criterion_04_gp_correctness():
    """Interpolation at noise 0, nonnegative variance, exact permutation symmetry."""
    rng = np.random.default_rng(1)
    x = np.sort(rng.uniform(0.0, 3.0, 15))
    y = np.cos(x)
    model = gp_fit(x, y, noise_var=0.0)
    mean, _ = gp_predict(model, x)
    interp_err = float(np.max(np.abs(mean - y)))

    x2 = rng.uniform(-2.0, 2.0, size=(25, 2))
    y2 = np.sin(x2[:, 0]) + 0.5 * np.cos(x2[:, 1])
    model2 = gp_fit(x2, y2, noise_var=1e-6)
    xq = rng.uniform(-3.0, 3.0, size=(1000, 2))
    base_mean, base_var = gp_predict(model2, xq)
    var_ok = bool(np.all(base_var >= 0.0))

    perm_ok = True
    for perm_seed in range(3):
        order = np.random.default_rng(perm_seed).permutation(25)
        pm, pv = gp_predict(gp_fit(x2[order], y2[order], noise_var=1e-6), xq)
        perm_ok &= np.array_equal(pm, base_mean) and np.array_equal(pv, base_var)

    ok = interp_err <= 1e-6 and var_ok and perm_ok
    _report(4, ok, f"interpolation error {interp_err:.2e} (<= 1e-6), "
                   f"variance >= 0 at 1000 queries: {var_ok}, "
                   f"exact permutation invariance: {perm_ok}")


def test_criterion_05_ei_matches_monte_carlo():
    """Closed-form EI vs 1e6-sample Monte Carlo, 20 random tuples, tol 3e-3."""
    rng = np.random.default_rng(2026)
    worst = 0.0
    for _ in range(20):
        mean = float(rng.uniform(-1.0, 1.0))
        std = float(rng.uniform(0.05, 0.5))
        c = float(rng.uniform(-1.0, 1.0))
        draws = mean + std * rng.standard_normal(1_000_000)
        mc = float(np.mean(np.maximum(c - draws, 0.0)))
        worst = max(worst, abs(float(expected_improvement(mean, std, c)) - mc))
    _report(5, worst <= 3e-3, f"max |closed - MC| = {worst:.2e} (<= 3e-3)")


def test_criterion_06_adaptive_reduces_to_plain_at_zero_omega():
    """omega = 0: adaptive and plain acquisitions replay bitwise-equal traces."""
    def rugged(x):
        return (x[0] - 0.4) ** 2 + 0.3 * np.sin(25.0 * x[0])

    identical = True
    for seed in (0, 3, 11):
        cfg = BoConfig(bounds=((0.0, 1.0),), seed=seed, n_init=5, n_iter=15,
                       omega=0.0)
        ei = optimize_rate(rugged, replace(cfg, acquisition="ei"))
        aei = optimize_rate(rugged, replace(cfg, acquisition="aei"))
        identical &= (ei.rows == aei.rows and ei.best_x == aei.best_x
                      and ei.best_y == aei.best_y)
    _report(6, identical, f"traces bitwise identical over 3 seeds: {identical}")


def test_criterion_07_rate_optimization_sanity():
    """Analytic bowl: the arg-min lands within 0.05 of 0.4, 10/10 seeds, < 30 s."""
    t0 = time.time()
    hits = 0
    for seed in range(10):
        trace = optimize_rate(lambda x: (x[0] - 0.4) ** 2,
                              BoConfig(bounds=((0.05, 0.95),), seed=seed,
                                       n_init=10, n_iter=40))
        hits += abs(trace.best_x[0] - 0.4) <= 0.05
    elapsed = time.time() - t0
    _report(7, hits == 10 and elapsed < 30.0,
            f"{hits}/10 seeds within 0.05 of the optimum, {elapsed:.1f}s (< 30s)")


def test_criterion_08_adaptive_convergence_advantage():
    """Median evaluations-to-within-1%-of-own-best: adaptive <= plain (tie passes)."""
    queue = QueueParams(0.1, 1.0, 5.0)
    layout = SensorLayout.uniform(1, 1000.0, 1000.0)
    objective = rate_objective(queue, 1, layout, WAKEUP, CHANNEL)
    medians = {}
    for acq in ("ei", "aei"):
        evals = [evals_to_own_best(optimize_rate(
            objective, BoConfig(bounds=((0.01, 0.99),), seed=seed,
                                acquisition=acq)))
            for seed in range(10)]
        medians[acq] = float(np.median(evals))
    ok = medians["aei"] <= medians["ei"]
    _report(8, ok, f"median evals to own best: adaptive {medians['aei']} "
                   f"vs plain {medians['ei']} (adaptive <= plain)")


def test_criterion_09_placement_beats_the_grid_budget():
    """Search reaches 2% of the 50x50 exhaustive optimum on <= 1000 evals, 8/10 seeds."""
    objective = placement_objective(WakeupParams(), CHANNEL)
    ks = np.arange(1, 51)
    ds = np.linspace(2.0, 40.0, 50)
    grid_best = max(objective(np.array([float(k), d])) for k in ks for d in ds)
    target = 0.98 * grid_best

    hits = 0
    used = []
    for seed in range(10):
        cfg = BoConfig(bounds=((1, 50), (2.0, 40.0)), seed=seed, n_init=16,
                       n_iter=120, integer_dims=(0,))
        trace = optimize_placement(objective, cfg)
        idx = iterations_to_target(trace, target, sense="max")
        if idx < trace.n_evals and idx + 1 <= 1000:
            hits += 1
            used.append(idx + 1)
    ok = hits >= 8
    _report(9, ok, f"{hits}/10 seeds inside the 2% band (grid optimum "
                   f"{grid_best:.4f} on 2500 evals); evals needed: "
                   f"median {np.median(used) if used else 'n/a'}, "
                   f"max {max(used) if used else 'n/a'} (<= 1000)")


def test_criterion_10_optimized_placement_lowers_delay():
    """Mean end-to-end delay: optimized <= random and <= fixed, 20-seed average."""
    queue = QueueParams(0.5, 1.0, 5.0)
    means = {"optimized": [], "random": [], "fixed": []}
    for seed in range(20):
        scenario = ScenarioConfig(subnets=3, nodes_per_subnet=8,
                                  sim_horizon=1000.0, seed=seed)
        cfg = BoConfig(bounds=((1, 8), (2.0, 40.0)), seed=seed, n_init=10,
                       n_iter=30, integer_dims=(0,))
        series = simulate_delay_comparison(
            scenario, ["optimized", "random", "fixed"], queue, WakeupParams(),
            CHANNEL, k_bounds=(1, 8), bo_config=cfg)
        for name in means:
            means[name].append(series[name].mean_delay)
    avg = {name: float(np.mean(v)) for name, v in means.items()}
    ok = avg["optimized"] <= avg["random"] and avg["optimized"] <= avg["fixed"]
    _report(10, ok, f"mean delay optimized {avg['optimized']:.4f} vs "
                    f"random {avg['random']:.4f} vs fixed {avg['fixed']:.4f}")


def test_criterion_11_manifest_replay_is_byte_identical(tmp_path):
    """Re-running any command from its manifest reproduces the CSV bytes."""
    import json

    first = tmp_path / "first"
    assert cli_main(["--outdir", str(first), "rate", "--n-init", "4",
                     "--iters", "3", "--seed", "5"]) == 0
    manifest = json.loads((first / "run.json").read_text())
    original = {name: (first / name).read_bytes()
                for name in manifest["outputs"]}

    replay = tmp_path / "replay"
    assert cli_main(["--outdir", str(replay), "--from-manifest",
                     str(first / "run.json")]) == 0
    replay_manifest = json.loads((replay / "run.json").read_text())
    same_names = replay_manifest["outputs"] == manifest["outputs"]
    same_bytes = all((replay / name).read_bytes() == original[name]
                     for name in manifest["outputs"])
    _report(11, same_names and same_bytes,
            f"replayed {len(original)} CSV(s) byte-identical: {same_bytes}")
