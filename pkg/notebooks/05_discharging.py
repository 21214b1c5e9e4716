"""
Discharging and sampling
========================

With any global unitary the best ground population is the sum of the
largest joint populations, and a passive discharger reaches it by shifting
one block.  The last cell samples a fixed-energy slice to show that energy
and entropy alone do not fix how much a charger can charge.
"""

import numpy as np

from passive_battery import (
    DiagonalState,
    QubitBattery,
    discharge_ordering,
    optimal_discharge,
    sort_oracle_discharge,
)
from passive_battery.charging import ladder_charge_amounts
from passive_battery.sampling import fixed_energy_samples

b = QubitBattery(0.6, 0.4)
q = DiagonalState.on_ladder([0.5, 0.3, 0.2])

# %% Block shift against the sort oracle.
print(optimal_discharge(b, q))
print(sort_oracle_discharge(b, q).final)

# %% More ordered dischargers do better.
print(discharge_ordering(b, DiagonalState.on_ladder([0.5, 0.4, 0.1]), q))
print(optimal_discharge(b, DiagonalState.on_ladder([1, 0, 0])).final)

# %% Four-level chargers at mean energy 0.5: same entropy, different charging amount.
battery = QubitBattery(0.75, 0.25)
x = fixed_energy_samples(4, 0.5, 20_000, seed=1)
s = -np.sum(np.where(x > 0, x * np.log(np.where(x > 0, x, 1)), 0), axis=1)
delta = ladder_charge_amounts(battery, x)
bins = np.floor(s / 1e-3).astype(int)
spread = max(np.ptp(delta[bins == k]) for k in np.unique(bins) if np.sum(bins == k) > 1)
print("largest charging-amount spread at fixed (E, S):", round(float(spread), 4))
