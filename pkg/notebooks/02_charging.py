"""
Charging a qubit battery with a passive charger
===============================================

Only energy-conserving unitaries are allowed, so population can only move
between |0,k> and |1,k-1>.  A pair charges when p0 q_k > p1 q_{k-1}.
"""

import numpy as np

from passive_battery import (
    DiagonalState,
    QubitBattery,
    brute_force_charge,
    charging_possible,
    entropy_pollution,
    optimal_charge,
    thermal_delta,
)

chargers = {"q": [0.5, 0.4, 0.1], "q'": [0.5, 0.3, 0.2]}
batteries = {"(0.6, 0.4)": QubitBattery(0.6, 0.4), "(0.8, 0.2)": QubitBattery(0.8, 0.2)}

# %% The majorization order of chargers does not decide which charges more.
for bname, b in batteries.items():
    for cname, probs in chargers.items():
        q = DiagonalState.on_ladder(probs)
        r = optimal_charge(b, q)
        print(f"battery {bname} charger {cname}: delta = {r.delta:.4f}, swaps {r.swapped},"
              f" brute force agrees: {brute_force_charge(b, q).delta == r.delta}")

# %% A pure battery ends at (q0, 1 - q0) whatever the rest of the charger looks like.
print(optimal_charge(QubitBattery(1, 0), DiagonalState.on_ladder([0.6, 0.3, 0.1])).final)

# %% Thermal chargers charge more as they get hotter, down to the uniform state.
b = batteries["(0.8, 0.2)"]
for beta in (1.5, 1.2, 0.9, 0.6, 0.3, 0.0):
    print(f"beta {beta:.1f}: {thermal_delta(b, beta, 3)}")

# %% Entropy pollution dS/dE; the uniform charger is the cleanest passive one.
grid = np.linspace(0.4, 0.95, 6)
for q0 in grid:
    q = DiagonalState.on_ladder([q0, (1 - q0) * 0.6, (1 - q0) * 0.4])
    if charging_possible(b, q):
        print(f"q0 = {q0:.3f}: pollution {entropy_pollution(b, q):.4f}")
