"""Charging a qubit battery with a diagonal ancilla under energy-conserving unitaries.

An energy-conserving unitary can only mix joint basis states of equal total
energy.  Within such a block the diagonal of ``U rho U^dag`` is majorized by
the block's populations, so the excited battery population is maximal when
the largest populations of each block are placed on battery-excited states.

Sums of joint populations are taken with :func:`math.fsum`, which is
correctly rounded.  Two routes that select the same multiset of populations
therefore agree bit for bit, which is what lets the closed forms be compared
with the brute-force oracle by exact equality.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Optional

import numpy as np

from .core import (
    PROB_TOL,
    DiagonalState,
    PreconditionError,
    QubitBattery,
    _entropy,
    joint_state,
)
from .geometry import is_passive

BRUTE_FORCE_MAX_JOINT = 10_000
BRUTE_FORCE_MAX_BLOCK = 8


@dataclass(frozen=True)
class ChargeResult:
    initial: QubitBattery
    final: QubitBattery
    delta: float
    swapped: tuple[int, ...] = ()
    """Charger levels ``k`` whose ``|0,k>`` population moved to an excited battery slot."""

    @property
    def final_battery(self) -> QubitBattery:
        return self.final


def _require_ladder(charger: DiagonalState, hint: str = "") -> None:
    if not charger.spectrum.is_ladder:
        raise PreconditionError("charger must live on the unit ladder (0, 1, ..., d-1)", hint)


def _require_passive_charger(charger: DiagonalState) -> None:
    if not is_passive(charger):
        raise PreconditionError("charger must be passive", repr(charger))


def _result(battery: QubitBattery, excited_new: list[float], excited_old: list[float],
            ground_new: list[float], swapped: Iterable[int]) -> ChargeResult:
    delta = math.fsum(excited_new + [-x for x in excited_old])
    final = QubitBattery(math.fsum(ground_new), math.fsum(excited_new), battery.gap)
    return ChargeResult(battery, final, delta, tuple(sorted(swapped)))


def charging_possible(battery: QubitBattery, charger: DiagonalState) -> bool:
    """Whether some adjacent pair obeys ``p0 q_{k+1} > p1 q_k`` (strict).

    This is ``p0/p1 > min_k q_k/q_{k+1}`` written without divisions, so a pure
    ground battery or a vanishing charger population needs no special case.
    """
    _require_ladder(charger, "use optimal_charge for general spectra")
    battery.require_passive()
    _require_passive_charger(charger)
    q = charger.probs
    return bool(np.any(battery.p0 * q[1:] > battery.p1 * q[:-1]))


def optimal_charge(battery: QubitBattery, charger: DiagonalState) -> ChargeResult:
    """Largest excited population reachable by any energy-conserving unitary.

    Degenerate total-energy blocks are found with the bucketing tolerance, so
    any charger spectrum is accepted (including unsorted tensor products).
    """
    joint = joint_state(battery, charger)
    prob = joint.probability.tolist()
    bat = joint.battery.tolist()
    chg = joint.charger.tolist()
    excited_new, excited_old, ground_new, swapped = [], [], [], []
    for block in joint.subspaces():
        idx = block.tolist()
        n_excited = sum(bat[i] for i in idx)
        # ties keep the original occupant, so equal pairs are not reported as swaps
        ranked = sorted(idx, key=lambda i: (-prob[i], -bat[i]))
        for i in ranked[:n_excited]:
            excited_new.append(prob[i])
            if bat[i] == 0:
                swapped.append(chg[i])
        ground_new.extend(prob[i] for i in ranked[n_excited:])
        excited_old.extend(prob[i] for i in idx if bat[i] == 1)
    return _result(battery, excited_new, excited_old, ground_new, swapped)


def _exceeds(candidate: list[float], best: list[float]) -> bool:
    return math.fsum(candidate + [-x for x in best]) > 0


def brute_force_charge(battery: QubitBattery, charger: DiagonalState) -> ChargeResult:
    """Exhaustive search over every permutation inside every degenerate block."""
    joint = joint_state(battery, charger)
    if len(joint) > BRUTE_FORCE_MAX_JOINT:
        raise ValueError(f"joint dimension {len(joint)} exceeds {BRUTE_FORCE_MAX_JOINT}")
    prob = joint.probability.tolist()
    bat = joint.battery.tolist()
    chg = joint.charger.tolist()
    excited_new, excited_old, ground_new, swapped = [], [], [], []
    for block in joint.subspaces():
        idx = block.tolist()
        if len(idx) > BRUTE_FORCE_MAX_BLOCK:
            raise ValueError(f"degenerate block of size {len(idx)} exceeds {BRUTE_FORCE_MAX_BLOCK}")
        slots_excited = [pos for pos, i in enumerate(idx) if bat[i] == 1]
        identity = tuple(range(len(idx)))
        best_perm = identity
        best = [prob[idx[s]] for s in slots_excited]
        for perm in itertools.permutations(range(len(idx))):
            # perm[s] is the position whose population lands in slot s
            cand = [prob[idx[perm[s]]] for s in slots_excited]
            if _exceeds(cand, best):
                best, best_perm = cand, perm
        excited_new.extend(best)
        excited_old.extend(prob[idx[s]] for s in slots_excited)
        ground_new.extend(prob[idx[best_perm[s]]] for s in range(len(idx)) if s not in slots_excited)
        swapped.extend(chg[idx[best_perm[s]]] for s in slots_excited if bat[idx[best_perm[s]]] == 0)
    return _result(battery, excited_new, excited_old, ground_new, swapped)


def delta_full_cascade(battery: QubitBattery, charger: DiagonalState) -> float:
    """Charging amount when every adjacent pair is swapped.

    ``delta = p0 sum_{i>=1} q_i - p1 sum_{i<=d-2} q_i``, valid when the battery
    is colder than every virtual temperature of the charger.
    """
    _require_ladder(charger)
    battery.require_passive()
    q = charger.probs
    if np.any(battery.p0 * q[1:] < battery.p1 * q[:-1] - PROB_TOL):
        raise PreconditionError(
            "battery must be colder than every charger gap (p0/p1 >= max q_i/q_{i+1})"
        )
    return battery.p0 * math.fsum(q[1:].tolist()) - battery.p1 * math.fsum(q[:-1].tolist())


class ThermalCharge(NamedTuple):
    delta: float
    charges: bool


def thermal_delta(battery: QubitBattery, beta: float, d: int) -> ThermalCharge:
    """Charging amount from a ``d``-level thermal charger at inverse temperature ``beta``.

    Charging needs a battery colder than the charger (``beta_b > beta``);
    otherwise the result is ``(0.0, False)``.
    """
    battery.require_passive()
    if beta < 0:
        raise PreconditionError("charger inverse temperature must be nonnegative")
    if d < 2:
        raise ValueError("a charger needs at least two levels")
    if not battery.beta > beta:
        return ThermalCharge(0.0, False)
    x = math.exp(-beta)
    z = math.fsum(x**j for j in range(d))
    q0, qlast = 1.0 / z, x ** (d - 1) / z
    delta = (battery.p0 - battery.p1) + (battery.p1 * qlast - battery.p0 * q0)
    return ThermalCharge(delta, True)


def entropy_pollution(battery: QubitBattery, charger: DiagonalState) -> float:
    """Entropy gained per unit of energy gained, ``dS/dE``, under optimal charging."""
    result = optimal_charge(battery, charger)
    d_energy = result.final.energy - battery.energy
    if not d_energy > 0:
        raise PreconditionError("charger cannot charge this battery (energy change is zero)")
    return (result.final.entropy - battery.entropy) / d_energy


def ladder_charge_amounts(battery: QubitBattery, chargers: np.ndarray) -> np.ndarray:
    """Vectorized optimal charging amount for many ladder chargers (one per row)."""
    q = np.atleast_2d(np.asarray(chargers, dtype=float))
    gains = battery.p0 * q[:, 1:] - battery.p1 * q[:, :-1]
    return np.clip(gains, 0.0, None).sum(axis=1)


@dataclass(frozen=True)
class StochasticMap:
    """Column-stochastic map ``((a, b), (1-a, 1-b))`` on ``(p0, p1)``."""

    a: float
    b: float
    kind: str = "classical"
    swaps: tuple[int, ...] = ()
    angles: Mapping[int, float] = field(default_factory=dict)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [1.0 - self.a, 1.0 - self.b]])

    def apply(self, battery: QubitBattery) -> QubitBattery:
        p0 = self.a * battery.p0 + self.b * battery.p1
        return QubitBattery(p0, 1.0 - p0, battery.gap)

    def delta(self, battery: QubitBattery) -> float:
        return battery.p0 - self.apply(battery).p0

    @property
    def passive_constraint(self) -> bool:
        """``S_01 >= S_10``, i.e. ``b >= 1 - a``; always true for a passive ancilla."""
        return self.b >= 1.0 - self.a - PROB_TOL


def _check_levels(charger: DiagonalState, levels: Iterable[int]) -> list[int]:
    levels = list(levels)
    if len(set(levels)) != len(levels):
        raise ValueError(f"swap levels {levels} reuse a joint population")
    for k in levels:
        if not 1 <= k <= charger.dim - 1:
            raise ValueError(f"swap level {k} outside [1, {charger.dim - 1}]")
    return sorted(levels)


def classical_stochastic_map(charger: DiagonalState, swaps: Iterable[int]) -> StochasticMap:
    """Battery map from exchanging ``|0,k> <-> |1,k-1>`` for every ``k`` in ``swaps``."""
    _require_ladder(charger)
    ks = _check_levels(charger, swaps)
    q = charger.probs
    a = 1.0 - math.fsum(q[k] for k in ks)
    b = math.fsum(q[k - 1] for k in ks)
    return StochasticMap(a, b, "classical", tuple(ks))


def quantum_stochastic_map(charger: DiagonalState, angles: Mapping[int, float]) -> StochasticMap:
    """Battery map from a partial rotation by ``alpha_k`` in each pair ``|0,k>, |1,k-1>``.

    ``alpha_k = 0`` is the full exchange and ``alpha_k = pi/2`` the identity.
    """
    _require_ladder(charger)
    ks = _check_levels(charger, angles)
    for k in ks:
        if not 0.0 <= angles[k] <= math.pi / 2:
            raise ValueError(f"angle for level {k} outside [0, pi/2]: {angles[k]}")
    q = charger.probs
    c2 = {k: math.cos(angles[k]) ** 2 for k in ks}
    a = 1.0 - math.fsum(q[k] * c2[k] for k in ks)
    b = math.fsum(q[k - 1] * c2[k] for k in ks)
    return StochasticMap(a, b, "quantum", tuple(ks), dict(angles))


def all_classical_maps(charger: DiagonalState) -> list[StochasticMap]:
    """Every swap subset, identity included (``2**(d-1)`` maps)."""
    levels = range(1, charger.dim)
    return [classical_stochastic_map(charger, ks)
            for r in range(charger.dim)
            for ks in itertools.combinations(levels, r)]


def reachable_ground_population(battery: QubitBattery, ancilla: DiagonalState) -> tuple[float, float]:
    """Interval of final ``p0`` reachable with any energy-conserving unitary.

    On a ladder each block is a pair, and a unitary on the pair moves a
    fraction ``cos^2 alpha_k`` of ``delta_k = p0 q_k - p1 q_{k-1}``.  The
    fractions are independent, so the reachable set is an interval whose ends
    are classical maps.
    """
    _require_ladder(ancilla)
    q = ancilla.probs
    gains = [battery.p0 * q[k] - battery.p1 * q[k - 1] for k in range(1, ancilla.dim)]
    lo = battery.p0 - math.fsum(g for g in gains if g > 0)
    hi = battery.p0 - math.fsum(g for g in gains if g < 0)
    return lo, hi


def full_swap_feasible(battery: QubitBattery, ancilla: DiagonalState) -> bool:
    """Whether the populations can be exactly inverted to ``(p1, p0)``."""
    battery.require_passive()
    lo, hi = reachable_ground_population(battery, ancilla)
    return lo - PROB_TOL <= battery.p1 <= hi + PROB_TOL


def supercharge_feasible(battery: QubitBattery, ancilla: DiagonalState) -> bool:
    """Whether some reachable battery has more energy and strictly less entropy.

    Binary entropy falls strictly with ``|p0 - 1/2|``, so the test is on that
    distance instead of on logarithms.
    """
    battery.require_passive()
    lo, _ = reachable_ground_population(battery, ancilla)
    more_energy = lo < battery.p0 - PROB_TOL
    less_entropy = abs(lo - 0.5) > abs(battery.p0 - 0.5) + PROB_TOL
    return more_energy and less_entropy


def binary_entropy(p0: float) -> float:
    return _entropy((p0, 1.0 - p0))


def alpha_scan(battery: QubitBattery, charger: DiagonalState, k: int,
               angles: Optional[Iterable[float]] = None) -> np.ndarray:
    """Excited population after rotating only the pair at level ``k``, per angle."""
    if angles is None:
        angles = np.linspace(0.0, math.pi / 2, 10)
    return np.array([quantum_stochastic_map(charger, {k: float(a)}).apply(battery).p1 for a in angles])
