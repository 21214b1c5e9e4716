"""
Several copies of a charger
===========================

A passive charger that fails alone can succeed once enough copies are
combined, unless it is thermal: thermal states stay useless for every n.
"""

import math

from passive_battery import (
    DiagonalState,
    QubitBattery,
    charging_possible_n,
    composite_levels,
    copy_ratio_sequences,
    min_copies_to_charge,
)

b = QubitBattery(0.55, 0.45)
q = DiagonalState.on_ladder([0.5, 0.3, 0.2])

# %% Per-state populations of two copies, grouped by total energy.
print(composite_levels(q, 2).energy_extremes())

# %% The ratio of adjacent composite states drifts with the number of copies.
for r in range(0, 7, 2):
    print(r, copy_ratio_sequences(q, 1, r))

# %% So the battery ratio 11/9 is eventually beaten.
print([charging_possible_n(b, q, n) for n in range(1, 9)])
print("minimum copies:", min_copies_to_charge(b, q, 8))

# %% A thermal charger with the same q0/q1 never charges.
thermal = DiagonalState.gibbs(math.log(5 / 3), 3)
print([charging_possible_n(b, thermal, n) for n in range(1, 9)])
