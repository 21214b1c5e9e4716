"""
Activating the battery
======================

The battery is activated once its excited population passes 1/2.  A single
passive charger can do it under energy-conserving unitaries; a thermal bath
can do it under thermal operations when it is hot enough.
"""

import math

import numpy as np

from passive_battery import (
    DiagonalState,
    QubitBattery,
    activation_condition_3d,
    bath_activation_bound,
    bath_can_activate,
    max_excited_population,
    thermo_majorization_curve,
)

# %% Charger route, with the per-branch verdicts.
for b, q in [((0.6, 0.4), [1 / 3, 1 / 3, 1 / 3]), ((0.55, 0.45), [0.4, 0.35, 0.25])]:
    battery, charger = QubitBattery(*b), DiagonalState.on_ladder(q)
    print(b, q, "p1 ->", round(max_excited_population(battery, charger), 4))
    print("   ", activation_condition_3d(battery, charger))

# %% Bath route: activation exactly below ln(2 p0).
battery = QubitBattery(0.75, 0.25)
print("beta_max =", bath_activation_bound(battery), "= ln 1.5 =", math.log(1.5))
for beta in np.arange(0.1, 0.8, 0.1):
    print(f"beta {beta:.1f}: activates {bath_can_activate(battery, beta)}")

# %% The thermo-majorization curves behind that verdict.
half = QubitBattery(0.5, 0.5).as_state()
for beta in (0.2, 0.5):
    print(beta, thermo_majorization_curve(battery.as_state(), beta).points.round(4).tolist(),
          thermo_majorization_curve(half, beta).points.round(4).tolist())
