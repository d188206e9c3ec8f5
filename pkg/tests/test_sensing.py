"""Tests for event detection and the wake-up expectation.

Frozen constants come from a 50-digit arbitrary-precision evaluation of
the Poisson kernel at rate y = 1/(decay * attenuation).
"""

import numpy as np
import pytest

from aquaplan import (
    ChannelParams,
    SensorLayout,
    WakeupParams,
    detection_probability,
    solve_p1,
    wakeup_expectation,
)
from aquaplan.sensing import poisson_pmf
from aquaplan.errors import ConstraintError, DomainError

CHANNEL = ChannelParams(0.0, 1.5, 10.0)

# rate for d = 1000 m, decay 0.6: y = 1/(0.6 * 46.187029938708157)
_Y_1000 = 0.036085166525719299


class TestPoissonPmf:
    def test_normalization_over_wide_rates(self):
        """Masses at k = 0..60 sum to 1 within 1e-9 for rates up to 20."""
        rng = np.random.default_rng(7)
        k = np.arange(0, 61)
        for y in rng.uniform(1e-6, 20.0, size=100):
            total = np.sum(poisson_pmf(k, y))
            assert total >= 1.0 - 1e-9

    def test_large_k_underflows_to_zero(self):
        """The tail vanishes: far beyond the rate the mass is numerically 0."""
        assert poisson_pmf(400, 1.0) == 0.0

    def test_invalid_arguments(self):
        with pytest.raises(DomainError):
            poisson_pmf(-1, 1.0)
        with pytest.raises(DomainError):
            poisson_pmf(2, 0.0)
        with pytest.raises(DomainError):
            poisson_pmf(1.5, 1.0)


class TestDetectionProbability:
    def test_inside_boundary_is_certain(self):
        w = WakeupParams()
        assert detection_probability(1, 2.0, 5.0, w, CHANNEL) == 1.0

    def test_frozen_values_outside_boundary(self):
        """Poisson mass at k = 1..3 with the d = 1000 m rate."""
        w = WakeupParams(decay=0.6)
        expected = {
            1: 0.034806241174888735,
            2: 0.00062799450446510387,
            3: 7.553762090286615e-6,
        }
        for k, p in expected.items():
            got = detection_probability(k, 1000.0, 5.0, w, CHANNEL)
            np.testing.assert_allclose(got, p, rtol=1e-13)

    def test_rate_value(self):
        """The k=1 mass equals y * e^-y at the frozen rate."""
        w = WakeupParams(decay=0.6)
        got = detection_probability(1, 1000.0, 5.0, w, CHANNEL)
        np.testing.assert_allclose(got, _Y_1000 * np.exp(-_Y_1000), rtol=1e-13)

    def test_decays_with_sensor_index(self):
        w = WakeupParams()
        probs = [detection_probability(k, 1000.0, 5.0, w, CHANNEL)
                 for k in range(1, 8)]
        assert all(a > b for a, b in zip(probs, probs[1:]))

    def test_results_are_probabilities(self):
        rng = np.random.default_rng(11)
        w = WakeupParams()
        for _ in range(50):
            k = int(rng.integers(1, 30))
            d = float(rng.uniform(6.0, 5000.0))
            p = detection_probability(k, d, 5.0, w, CHANNEL)
            assert 0.0 <= p <= 1.0

    def test_linear_scale_changes_rate(self):
        """Switching the attenuation scale changes the kernel rate."""
        w = WakeupParams()
        db = detection_probability(1, 1000.0, 5.0, w, CHANNEL, attenuation_scale="db")
        lin = detection_probability(1, 1000.0, 5.0, w, CHANNEL,
                                    attenuation_scale="linear")
        assert db != lin
        with pytest.raises(DomainError):
            detection_probability(1, 1000.0, 5.0, w, CHANNEL,
                                  attenuation_scale="nats")

    def test_invalid_arguments(self):
        w = WakeupParams()
        with pytest.raises(DomainError):
            detection_probability(0, 100.0, 5.0, w, CHANNEL)
        with pytest.raises(DomainError):
            detection_probability(1, -1.0, 5.0, w, CHANNEL)


class TestSensorLayout:
    def test_uniform_spacing(self):
        layout = SensorLayout.uniform(3, 10.0, 30.0)
        np.testing.assert_allclose(layout.distances_m, (10.0, 20.0, 30.0))
        assert layout.boundary_m == (5.0,) * 3
        assert layout.efficiencies == (0.9,) * 3
        assert len(layout) == 3

    def test_from_spacing_multiples(self):
        layout = SensorLayout.from_spacing(4, 2.5)
        np.testing.assert_allclose(layout.distances_m, (2.5, 5.0, 7.5, 10.0))

    def test_invariants_enforced(self):
        with pytest.raises(DomainError):
            SensorLayout((), (), ())
        with pytest.raises(DomainError):
            SensorLayout((1.0, 2.0), (5.0,), (0.9, 0.9))
        with pytest.raises(DomainError):
            SensorLayout((0.0,), (5.0,), (0.9,))
        with pytest.raises(DomainError):
            SensorLayout((1.0,), (5.0,), (1.5,))
        with pytest.raises(DomainError):
            SensorLayout((1.0,), (5.0,), (0.0,))

    def test_wakeup_params_invariants(self):
        with pytest.raises(DomainError):
            WakeupParams(gamma_wake=1.2)
        with pytest.raises(DomainError):
            WakeupParams(decay=0.0)


class TestWakeupExpectation:
    def test_zero_wakeup_probability_gives_zero(self):
        layout = SensorLayout.uniform(5, 10.0, 50.0)
        w = WakeupParams(gamma_wake=0.0)
        assert wakeup_expectation(layout, w, CHANNEL) == 0.0

    def test_single_sensor_inside_boundary(self):
        """One certain detection: E(X) = 1 - (1 - gamma*eps)^1."""
        layout = SensorLayout((2.0,), (5.0,), (1.0,))
        w = WakeupParams(gamma_wake=0.9)
        np.testing.assert_allclose(wakeup_expectation(layout, w, CHANNEL), 0.9,
                                   rtol=1e-15)

    def test_matches_loop_over_sensors(self):
        """Vectorized sum equals the naive per-sensor loop."""
        layout = SensorLayout.uniform(6, 8.0, 300.0, efficiency=0.8)
        w = WakeupParams(gamma_wake=0.7)
        total = 0.0
        for idx in range(1, 7):
            pr = detection_probability(idx, layout.distances_m[idx - 1],
                                       layout.boundary_m[idx - 1], w, CHANNEL)
            total += (1.0 - (1.0 - w.gamma_wake * layout.efficiencies[idx - 1]) ** idx) * pr
        np.testing.assert_allclose(wakeup_expectation(layout, w, CHANNEL), total,
                                   rtol=1e-12)

    def test_monotone_in_gamma_wake(self):
        layout = SensorLayout.uniform(8, 5.0, 400.0)
        values = [wakeup_expectation(layout, WakeupParams(gamma_wake=g), CHANNEL)
                  for g in np.linspace(0.0, 1.0, 21)]
        assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))

    def test_bounded_by_sensor_count_and_detection_mass(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            k = int(rng.integers(1, 12))
            layout = SensorLayout.uniform(k, float(rng.uniform(1.0, 20.0)),
                                          float(rng.uniform(30.0, 2000.0)))
            w = WakeupParams(gamma_wake=float(rng.uniform(0.0, 1.0)))
            e = wakeup_expectation(layout, w, CHANNEL)
            pr_sum = sum(
                detection_probability(i, layout.distances_m[i - 1],
                                      layout.boundary_m[i - 1], w, CHANNEL)
                for i in range(1, k + 1))
            assert 0.0 <= e <= k
            assert e <= pr_sum + 1e-12


class TestSolveP1:
    def test_singleton_candidate(self):
        w = WakeupParams()
        res = solve_p1([4], w, CHANNEL, d_min=10.0, d_max=100.0)
        assert res.k == 4
        expected = wakeup_expectation(SensorLayout.uniform(4, 10.0, 100.0), w, CHANNEL)
        np.testing.assert_allclose(res.expectation, expected, rtol=1e-15)

    def test_picks_larger_of_two(self):
        """Two candidates ordered by exhaustive evaluation."""
        w = WakeupParams()
        e = {k: wakeup_expectation(SensorLayout.uniform(k, 10.0, 100.0), w, CHANNEL)
             for k in (2, 7)}
        res = solve_p1([2, 7], w, CHANNEL, d_min=10.0, d_max=100.0)
        assert res.k == max(e, key=e.get)
        np.testing.assert_allclose(res.expectation, max(e.values()), rtol=1e-15)

    def test_matches_exhaustive_search(self):
        """Solver output equals brute force over a <= 200-point candidate set."""
        w = WakeupParams(gamma_wake=0.8)
        counts = range(1, 41)
        res = solve_p1(counts, w, CHANNEL, d_min=5.0, d_max=500.0)
        brute = max(
            ((k, wakeup_expectation(SensorLayout.uniform(k, 5.0, 500.0), w, CHANNEL))
             for k in counts),
            key=lambda kv: kv[1])
        assert res.k == brute[0]
        np.testing.assert_allclose(res.expectation, brute[1], rtol=1e-15)

    def test_explicit_spacing(self):
        w = WakeupParams()
        distances = (3.0, 9.0, 27.0, 81.0)
        res = solve_p1([2, 4], w, CHANNEL, spacing="explicit", distances=distances)
        assert res.layout.distances_m in (distances[:2], distances)

    def test_budget_violation_raises(self):
        w = WakeupParams(gamma_wake=0.9, gamma_cap=0.5)
        with pytest.raises(ConstraintError):
            solve_p1([1, 2], w, CHANNEL, d_min=10.0, d_max=100.0)

    def test_empty_candidates_raise(self):
        with pytest.raises(DomainError):
            solve_p1([], WakeupParams(), CHANNEL, d_min=10.0, d_max=100.0)

    def test_uniform_spacing_needs_range(self):
        with pytest.raises(DomainError):
            solve_p1([2], WakeupParams(), CHANNEL)
