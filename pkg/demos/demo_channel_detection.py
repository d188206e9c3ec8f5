"""Walkthrough: acoustic path loss and how it shapes event detection.

Run with:  python3 demos/demo_channel_detection.py

Sweeps the absorption coefficient over frequency, converts it into total
path loss over distance, and shows how the Poisson detection kernel and
the wake-up expectation respond.  Ends with the active-sensor-count
search over a small candidate range.
"""

import numpy as np

from aquaplan import (
    ChannelParams,
    SensorLayout,
    WakeupParams,
    attenuation_db,
    detection_probability,
    solve_p1,
    thorp_absorption,
    wakeup_expectation,
)

channel = ChannelParams(a0_db=0.0, zeta=1.5, freq_khz=10.0)
wakeup = WakeupParams(gamma_wake=0.9, gamma_cap=1.0, decay=0.6)

print("=== absorption coefficient (dB/km) ===")
for f in (0.5, 1.0, 5.0, 10.0, 25.0, 50.0):
    print(f"  {f:6.1f} kHz -> {thorp_absorption(f):8.4f}")

print("\n=== total path loss at 10 kHz, practical spreading ===")
for d in (10.0, 50.0, 100.0, 500.0, 1000.0, 5000.0):
    print(f"  {d:7.0f} m -> {attenuation_db(channel, d):8.3f} dB")

print("\n=== detection probability of sensor k at distance d ===")
print("  inside the 5 m boundary detection is certain:")
print(f"    k=1, d=2 m   -> {detection_probability(1, 2.0, 5.0, wakeup, channel)}")
print("  outside, the Poisson mass at k decays fast with k:")
for k in (1, 2, 3):
    p = detection_probability(k, 1000.0, 5.0, wakeup, channel)
    print(f"    k={k}, d=1000 m -> {p:.6e}")

print("\n=== expected wake-ups as the line of sensors grows ===")
print("  k  E(X)")
for k in range(1, 11):
    layout = SensorLayout.uniform(k, 10.0, 1000.0)
    print(f"  {k:2d}  {wakeup_expectation(layout, wakeup, channel):.5f}")

print("\n=== active-count search over k = 1..8 ===")
result = solve_p1(range(1, 9), wakeup, channel, d_min=10.0, d_max=1000.0)
print(f"  best count K* = {result.k}, E* = {result.expectation:.5f}")
print(f"  spacing: {np.round(result.layout.distances_m, 1)}")
