"""Charging with ``n`` independent copies of a ladder charger.

The ``n``-copy charger is described by exponent multisets: how many copies
sit in each base level.  All basis states sharing an exponent vector have the
same population, so only ``C(n+d-1, d-1)`` rows are needed instead of ``d**n``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .charging import _require_ladder, _require_passive_charger, charging_possible
from .core import DiagonalState, PreconditionError, QubitBattery
from .geometry import gibbs_parameter

COMPOSITE_CAP = 2_000_000


@dataclass(frozen=True, eq=False)
class CompositeLevelTable:
    charger: DiagonalState
    copies: int
    exponents: np.ndarray  # (rows, d) occupation counts, each row sums to copies
    energies: np.ndarray  # integer total energies
    probabilities: np.ndarray  # population of one basis state of the row
    multiplicities: np.ndarray  # number of basis states sharing the row (multinomial)

    def __len__(self) -> int:
        return self.energies.size

    @property
    def total_probability(self) -> float:
        return math.fsum((self.multiplicities * self.probabilities).tolist())

    def energy_extremes(self) -> dict[int, tuple[float, float]]:
        """``energy -> (smallest, largest)`` per-state population."""
        out: dict[int, tuple[float, float]] = {}
        for e, p in zip(self.energies.tolist(), self.probabilities.tolist()):
            lo, hi = out.get(e, (p, p))
            out[e] = (min(lo, p), max(hi, p))
        return out


def multiset_count(d: int, n: int) -> int:
    return math.comb(n + d - 1, d - 1)


def _check_size(d: int, n: int) -> None:
    if n < 1:
        raise ValueError("number of copies must be at least 1")
    size = multiset_count(d, n)
    if size > COMPOSITE_CAP:
        raise ValueError(f"{n} copies of a {d}-level charger give {size} multisets (cap {COMPOSITE_CAP})")


def composite_levels(charger: DiagonalState, n: int) -> CompositeLevelTable:
    _require_ladder(charger)
    d = charger.dim
    _check_size(d, n)
    rows = []
    for combo in itertools.combinations_with_replacement(range(d), n):
        rows.append(np.bincount(combo, minlength=d))
    exps = np.array(rows, dtype=np.int64)
    energies = exps @ np.arange(d)
    q = charger.probs
    with np.errstate(divide="ignore"):
        probs = np.prod(np.where(exps > 0, q[None, :] ** exps, 1.0), axis=1)
    mult = np.array([math.factorial(n) // math.prod(math.factorial(int(a)) for a in row)
                     for row in exps], dtype=float)
    for arr in (exps, energies, probs, mult):
        arr.setflags(write=False)
    return CompositeLevelTable(charger, n, exps, energies, probs, mult)


def _product_rtol(copies: int) -> float:
    """Relative rounding bound of a per-state population built from ``copies`` factors.

    One copy is exact, so single-copy verdicts match :func:`charging_possible`.
    """
    return 4 * (copies - 1) * np.finfo(float).eps


def _charges(battery: QubitBattery, table: CompositeLevelTable) -> bool:
    """Strict inequality beyond rounding; comparisons inside the band count as ties."""
    extremes = table.energy_extremes()
    slack = 1.0 + _product_rtol(table.copies)
    for e, (lo, _) in extremes.items():
        upper = extremes.get(e + 1)
        if upper is not None and battery.p0 * upper[1] > battery.p1 * lo * slack:
            return True
    return False


def charging_possible_n(battery: QubitBattery, charger: DiagonalState, n: int) -> bool:
    """Whether ``n`` copies can charge: some states ``u, v`` with ``E_v = E_u + 1`` and ``p0 q_v > p1 q_u``."""
    battery.require_passive()
    _require_passive_charger(charger)
    return _charges(battery, composite_levels(charger, n))


def thermal_never_charges(battery: QubitBattery, charger: DiagonalState) -> bool:
    """True when the charger is exactly thermal and too cold; no number of copies helps."""
    battery.require_passive()
    _require_passive_charger(charger)
    if charger.dim < 2:
        return True
    try:
        beta = gibbs_parameter(charger)
    except PreconditionError:
        return False
    return beta is not None and not charging_possible(battery, charger)


def min_copies_to_charge(battery: QubitBattery, charger: DiagonalState, n_max: int) -> Optional[int]:
    """Smallest ``n <= n_max`` for which ``n`` copies charge the battery.

    ``None`` means "not found within the budget", except for thermal chargers
    that cannot charge singly, where it is a definitive no (see
    :func:`thermal_never_charges`).
    """
    battery.require_passive()
    if not battery.p0 > battery.p1:
        raise PreconditionError("battery must satisfy p0 > p1")
    _require_ladder(charger)
    _require_passive_charger(charger)
    _check_size(charger.dim, n_max)
    if thermal_never_charges(battery, charger):
        return None
    for n in range(1, n_max + 1):
        if _charges(battery, composite_levels(charger, n)):
            return n
    return None


def copy_ratio_sequences(charger: DiagonalState, k: int, r: int) -> tuple[float, float]:
    """Two candidate population ratios for adjacent energies of ``r + 1`` copies.

    For even ``r = 2s`` these are exact ratios of composite basis states:
    ``|0>|k-1>^s|k+1>^s`` against ``|1>|k>^{2s}`` (first value) and
    ``|1>|k>^{2s}`` against ``|2>|k-1>^s|k+1>^s`` (second value).  Odd ``r``
    interpolates the geometric sequence.
    """
    _require_ladder(charger)
    d = charger.dim
    if not 1 <= k <= d - 2:
        raise ValueError(f"k must be an interior level in [1, {d - 2}]")
    if r < 0:
        raise ValueError("r must be nonnegative")
    q = charger.probs
    if np.any(q[: max(3, k + 2)] == 0):
        raise PreconditionError("charger populations must be positive")
    curvature = q[k - 1] * q[k + 1] / q[k] ** 2
    return (q[0] / q[1]) * curvature ** (r / 2), (q[1] / q[2]) * curvature ** (-r / 2)


def free_set_membership(battery: QubitBattery, charger: DiagonalState, n: int) -> bool:
    """Membership in the set of chargers that cannot charge with ``m <= n`` copies."""
    for m in range(1, n + 1):
        if charging_possible_n(battery, charger, m):
            return False
    return True


def optimal_charge_n(battery: QubitBattery, charger: DiagonalState, n: int) -> float:
    """Largest excited population reachable with ``n`` copies.

    Block at total energy ``T`` holds ``|0,v>`` with ``E_v = T`` and ``|1,u>``
    with ``E_u = T - 1``; the excited slots take the largest populations.
    """
    table = composite_levels(charger, n)
    by_energy: dict[int, list[tuple[float, float]]] = {}
    for e, p, m in zip(table.energies.tolist(), table.probabilities.tolist(),
                       table.multiplicities.tolist()):
        by_energy.setdefault(e, []).append((p, m))
    excited = []
    for total in set(by_energy) | {e + 1 for e in by_energy}:
        pops = [(battery.p0 * p, m) for p, m in by_energy.get(total, [])]
        pops += [(battery.p1 * p, m) for p, m in by_energy.get(total - 1, [])]
        slots = sum(m for _, m in by_energy.get(total - 1, []))
        for pop, m in sorted(pops, reverse=True):
            take = min(m, slots)
            if take <= 0:
                break
            excited.append(pop * take)
            slots -= take
    return math.fsum(excited)
