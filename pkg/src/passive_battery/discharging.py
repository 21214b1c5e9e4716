"""Lowering a qubit battery's energy with a passive ancilla and any global unitary.

Without the energy-conservation constraint any joint permutation is allowed,
so the best ground population is the sum of the ``d+1`` largest joint
populations.  For a passive discharger both columns of the joint table are
already sorted, and the optimum shifts one block of each column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .core import DiagonalState, PreconditionError, QubitBattery, majorizes
from .geometry import is_passive


@dataclass(frozen=True)
class DischargeResult:
    initial: QubitBattery
    final: QubitBattery
    shift: Optional[int]
    """Block-shift index ``k``; ``None`` when nothing can be gained."""
    energy_drop: float

    @property
    def final_battery(self) -> QubitBattery:
        return self.final


def _columns(battery: QubitBattery, discharger: DiagonalState) -> tuple[list[float], list[float]]:
    q = discharger.probs
    return (battery.p0 * q).tolist(), (battery.p1 * q).tolist()


def _require_passive(discharger: DiagonalState) -> None:
    if not (discharger.spectrum.is_sorted and is_passive(discharger)):
        raise PreconditionError("discharger must be passive on a sorted spectrum", repr(discharger))


def sort_oracle_discharge(battery: QubitBattery, discharger: DiagonalState) -> DischargeResult:
    """Ground population = sum of the ``d+1`` largest joint populations."""
    ground, excited = _columns(battery, discharger)
    ranked = sorted(ground + excited, reverse=True)
    top = ranked[: len(ground)]
    p0 = math.fsum(top)
    final = QubitBattery(p0, math.fsum(ranked[len(ground):]), battery.gap)
    drop = math.fsum(top + [-x for x in ground])
    return DischargeResult(battery, final, None, drop * battery.gap)


def block_shift_index(battery: QubitBattery, discharger: DiagonalState) -> Optional[int]:
    """Largest ``k`` with ``p0 q_{d-k} < p1 q_k``; ``None`` when ``p0 q_d >= p1 q_0``.

    ``p1 q_k - p0 q_{d-k}`` falls with ``k``, so this ``k`` also satisfies
    ``p1 q_{k+1} <= p0 q_{d-k-1}`` and the shifted blocks are exactly the
    ``d+1`` largest joint populations.
    """
    ground, excited = _columns(battery, discharger)
    top = len(ground) - 1  # the last index, d
    best = None
    for k in range(top + 1):
        if ground[top - k] < excited[k]:
            best = k
    return best


def optimal_discharge(battery: QubitBattery, discharger: DiagonalState) -> DischargeResult:
    """Block shift: the ``k+1`` bottom ground-column entries trade places with the ``k+1`` top excited ones."""
    _require_passive(discharger)
    ground, excited = _columns(battery, discharger)
    k = block_shift_index(battery, discharger)
    n = len(ground)
    if k is None:
        kept, moved_in = ground, []
    else:
        kept, moved_in = ground[: n - k - 1], excited[: k + 1]
    new_ground = kept + moved_in
    p0 = math.fsum(new_ground)
    leftover = ground[len(kept):] + excited[len(moved_in):]
    final = QubitBattery(p0, math.fsum(leftover), battery.gap)
    drop = math.fsum(new_ground + [-x for x in ground])
    return DischargeResult(battery, final, k, drop * battery.gap)


def discharging_possible(battery: QubitBattery, discharger: DiagonalState) -> bool:
    """``p0/p1 < q_0/q_d``; with ``q_d = 0`` the sort oracle decides."""
    battery.require_passive()
    _require_passive(discharger)
    q = discharger.probs
    if q[-1] > 0:
        return battery.p0 * q[-1] < battery.p1 * q[0]
    return sort_oracle_discharge(battery, discharger).energy_drop > 0


class DischargeOrdering(NamedTuple):
    better: Optional[str]
    """``"A"``, ``"B"``, ``"equal"``, or ``None`` when the two are incomparable."""
    p0_a: float
    p0_b: float


def discharge_ordering(battery: QubitBattery, a: DiagonalState, b: DiagonalState) -> DischargeOrdering:
    """Majorization verdict between two dischargers, with both optimal ground populations.

    A more ordered (majorizing) discharger never does worse.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    a_wins, b_wins = majorizes(a, b), majorizes(b, a)
    if a_wins and b_wins:
        better = "equal"
    elif a_wins:
        better = "A"
    elif b_wins:
        better = "B"
    else:
        better = None
    return DischargeOrdering(better, optimal_discharge(battery, a).final.p0,
                             optimal_discharge(battery, b).final.p0)


def discharge_gain(battery: QubitBattery, discharger: DiagonalState) -> float:
    """Increase of the ground population, ``p0_final - p0``."""
    return optimal_discharge(battery, discharger).energy_drop / battery.gap
