"""Pushing a qubit battery past population inversion.

A battery is activated when its excited population exceeds 1/2, at which
point work can be drawn from it unitarily.  Two routes are covered: a single
passive charger under energy-conserving unitaries, and a qubit thermal bath
under thermal operations (thermo-majorization).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .charging import _require_ladder, optimal_charge
from .core import PROB_TOL, DiagonalState, EnergySpectrum, PreconditionError, QubitBattery
from .geometry import is_passive


def max_excited_population(battery: QubitBattery, charger: DiagonalState) -> float:
    return optimal_charge(battery, charger).final.p1


def activates(battery: QubitBattery, charger: DiagonalState) -> bool:
    return max_excited_population(battery, charger) > 0.5 + PROB_TOL


def _ratio(num: float, den: float) -> float:
    if den == 0:
        return math.copysign(math.inf, num) if num else math.nan
    return num / den


@dataclass(frozen=True)
class ActivationVerdict:
    branch_i: bool
    branch_ii: bool
    branch_both: bool
    formula_max: float
    formula_satisfied: bool

    @property
    def activates(self) -> bool:
        return self.branch_i or self.branch_ii or self.branch_both


def activation_condition_3d(battery: QubitBattery, charger: DiagonalState) -> ActivationVerdict:
    """Branch-by-branch activation test for a three-level charger.

    Branch I swaps the ``|0,1>, |1,0>`` pair, branch II the ``|0,2>, |1,1>``
    pair, and the last branch both.  Each branch only counts when its swaps
    actually charge, and its verdict is ``p1_final > 1/2`` computed from
    populations, which stays correct when ``1 - 2 q_i`` is negative.  The
    closed-form maximum of the three ratio bounds is reported alongside for
    reference; it is not guarded and can claim activation where none exists.
    """
    if charger.dim != 3:
        raise PreconditionError("activation_condition_3d needs a 3-level charger", f"got d={charger.dim}")
    _require_ladder(charger)
    battery.require_passive()
    if not is_passive(charger):
        raise PreconditionError("charger must be passive", repr(charger))
    p0, p1 = battery.p0, battery.p1
    q0, q1, q2 = charger.probs.tolist()
    gain_i = p0 * q1 - p1 * q0
    gain_ii = p0 * q2 - p1 * q1
    charges_i, charges_ii = gain_i > 0, gain_ii > 0
    half = 0.5 + PROB_TOL
    branch_i = charges_i and math.fsum((p1, gain_i)) > half
    branch_ii = charges_ii and math.fsum((p1, gain_ii)) > half
    branch_both = charges_i and charges_ii and math.fsum((p1, gain_i, gain_ii)) > half
    formula = max(
        _ratio(1 - 2 * q0, 1 - 2 * q1),
        _ratio(1 - 2 * q1, 1 - 2 * q2),
        _ratio(1 - 2 * q0 - 2 * q1, 1 - 2 * q1 - 2 * q2),
        key=lambda x: -math.inf if math.isnan(x) else x,
    )
    ratio = _ratio(p0, p1)
    return ActivationVerdict(branch_i, branch_ii, branch_both, formula, ratio < formula)


def bath_activation_bound(battery: QubitBattery) -> float:
    """Largest bath inverse temperature that can still activate: ``ln(2 p0) / E``.

    It always lies strictly below the battery's own inverse temperature.
    """
    if not battery.p0 > 0.5:
        raise PreconditionError("battery must satisfy p0 > 1/2", f"p0 = {battery.p0}")
    bound = math.log(2 * battery.p0) / battery.gap
    assert bound < battery.beta
    return bound


@dataclass(frozen=True, eq=False)
class ThermoCurve:
    """Piecewise-linear thermo-majorization curve; rows of ``points`` are ``(x, y)``."""

    points: np.ndarray
    order: tuple[int, ...]

    @property
    def slopes(self) -> np.ndarray:
        dx = np.diff(self.points[:, 0])
        dy = np.diff(self.points[:, 1])
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(dx > 0, dy / np.where(dx > 0, dx, 1.0), np.inf)

    @property
    def kinks(self) -> np.ndarray:
        return self.points[1:-1, 0]

    def __call__(self, x) -> np.ndarray:
        return np.interp(x, self.points[:, 0], self.points[:, 1])


def gibbs_weights(spectrum: EnergySpectrum, beta: float) -> np.ndarray:
    w = np.exp(-beta * (spectrum.levels - spectrum.levels.min()))
    return w / w.sum()


def thermo_majorization_curve(state: DiagonalState, beta: float) -> ThermoCurve:
    """Cumulative ``(sum t_i, sum p_i)`` with levels ordered by decreasing ``p_i / t_i``."""
    t = gibbs_weights(state.spectrum, beta)
    p = state.probs
    order = sorted(range(p.size), key=lambda i: -p[i] / t[i])
    pts = np.zeros((p.size + 1, 2))
    pts[1:, 0] = np.cumsum(t[order])
    pts[1:, 1] = np.cumsum(p[order])
    pts[-1] = (1.0, 1.0)
    pts.setflags(write=False)
    return ThermoCurve(pts, tuple(order))


def _check_common(p: DiagonalState, q: DiagonalState) -> None:
    if p.spectrum != q.spectrum:
        raise ValueError("thermo-majorization needs both states on the same spectrum")


def thermo_majorizes(p: DiagonalState, q: DiagonalState, beta: float) -> bool:
    """``p``'s curve lies on or above ``q``'s everywhere.

    The gap between a concave curve and a piecewise-linear one is concave on
    each linear piece, so checking ``q``'s kinks is enough.
    """
    _check_common(p, q)
    cp, cq = thermo_majorization_curve(p, beta), thermo_majorization_curve(q, beta)
    xs = cq.points[:, 0]
    return bool(np.all(cp(xs) >= cq.points[:, 1] - PROB_TOL))


def strictly_thermo_majorizes(p: DiagonalState, q: DiagonalState, beta: float) -> bool:
    """Dominance with a strict gap at ``q``'s first kink."""
    if not thermo_majorizes(p, q, beta):
        return False
    cq = thermo_majorization_curve(q, beta)
    x, y = cq.points[1]
    cp = thermo_majorization_curve(p, beta)
    return bool(cp(x) > y + PROB_TOL)


def bath_can_activate(battery: QubitBattery, beta: float) -> bool:
    """Whether a qubit bath at ``beta`` can take the battery to ``(1/2, 1/2)`` strictly."""
    half = QubitBattery(0.5, 0.5, battery.gap).as_state()
    return strictly_thermo_majorizes(battery.as_state(), half, beta)
