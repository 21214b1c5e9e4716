"""Passive states, their polytope, and charging/discharging of a qubit battery with passive ancillas."""

from .activation import (
    ActivationVerdict,
    ThermoCurve,
    activates,
    activation_condition_3d,
    bath_activation_bound,
    bath_can_activate,
    max_excited_population,
    strictly_thermo_majorizes,
    thermo_majorization_curve,
    thermo_majorizes,
)
from .charging import (
    ChargeResult,
    StochasticMap,
    brute_force_charge,
    charging_possible,
    classical_stochastic_map,
    delta_full_cascade,
    entropy_pollution,
    full_swap_feasible,
    optimal_charge,
    quantum_stochastic_map,
    supercharge_feasible,
    thermal_delta,
)
from .core import (
    DiagonalState,
    EnergySpectrum,
    InvalidStateError,
    JointDiagonalState,
    PreconditionError,
    QubitBattery,
    joint_state,
    majorizes,
    mean_energy,
    shannon_entropy,
    tensor,
)
from .discharging import (
    DischargeResult,
    discharge_ordering,
    discharging_possible,
    optimal_discharge,
    sort_oracle_discharge,
)
from .geometry import (
    VertexSet,
    Witness,
    detect_active,
    evaluate_witness,
    facet_witnesses,
    gibbs_parameter,
    is_passive,
    polytope_vertices,
    vertex_decomposition,
    virtual_temperatures,
)
from .multicopy import (
    CompositeLevelTable,
    charging_possible_n,
    composite_levels,
    copy_ratio_sequences,
    free_set_membership,
    min_copies_to_charge,
    optimal_charge_n,
)
from .sampling import (
    sample_active_diagonal,
    sample_passive,
    sample_passive_fixed_energy,
)

__version__ = "0.1.0"
