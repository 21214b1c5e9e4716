"""
The passive polytope
====================

Passive states are diagonal states whose populations never grow with energy.
On a d-level ladder they form a simplex with d vertices, each uniform on the
lowest j levels.
"""

import numpy as np

from passive_battery import (
    DiagonalState,
    detect_active,
    facet_witnesses,
    gibbs_parameter,
    is_passive,
    polytope_vertices,
    vertex_decomposition,
    virtual_temperatures,
)
from passive_battery.geometry import evaluate_witness, reconstruct

# %% Vertices of the three-level polytope: zero temperature first, infinite last.
for v in polytope_vertices(3):
    state = DiagonalState.on_ladder(v)
    print(np.round(v, 4), "beta =", gibbs_parameter(state))

# %% Every passive state is a unique convex mix of the vertices.
q = DiagonalState.on_ladder([0.5, 0.3, 0.2])
w = vertex_decomposition(q)
print("weights", w, "rebuilt", reconstruct(w))

# %% Each adjacent gap carries its own virtual temperature; a thermal state has one.
print("virtual temperatures", virtual_temperatures(q))
thermal = DiagonalState.gibbs(np.log(2), 3)
print("thermal", thermal.probs, "->", virtual_temperatures(thermal))

# %% Gibbs states sit strictly inside the polytope.
for beta in (0.1, 1.0, 5.0):
    print(beta, vertex_decomposition(DiagonalState.gibbs(beta, 4)))

# %% Facet witnesses flag active states.
for probs in ([0.3, 0.7], [0.4, 0.2, 0.4], [0.5, 0.3, 0.2]):
    s = DiagonalState.on_ladder(probs)
    values = {w.label: round(evaluate_witness(w, s), 3) for w in facet_witnesses(s.dim)}
    print(probs, "passive" if is_passive(s) else "active", detect_active(s), values)
