"""Diagonal states, spectra and the bookkeeping shared by every other module.

All states here are diagonal in a fixed energy eigenbasis, so a state is just a
probability vector attached to a list of energies.  Values are immutable once
built; the numpy arrays they hold are flagged read-only.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

PROB_TOL = 1e-12
"""Normalization tolerance and the width of the "treated as equal" band."""

DEGENERACY_TOL = 1e-9
"""Absolute tolerance for bucketing (nearly) equal energies."""

TENSOR_CAP = 2_000_000


class InvalidStateError(ValueError):
    """A probability vector or spectrum that is malformed."""


class PreconditionError(ValueError):
    """A well-formed input that violates the premise of an operation.

    ``precondition`` names the violated premise so callers (the CLI in
    particular) can report it verbatim.
    """

    def __init__(self, precondition: str, detail: str = ""):
        self.precondition = precondition
        msg = precondition if not detail else f"{precondition}: {detail}"
        super().__init__(msg)


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class EnergySpectrum:
    """Energies of the basis states, in the order of the probability vector.

    Spectra built by :meth:`ladder` are sorted with unit gaps.  Tensor products
    keep one energy per product basis state, so they are generally unsorted;
    operations that need a sorted spectrum check :attr:`is_sorted` themselves.
    """

    levels: np.ndarray

    def __post_init__(self):
        levels = np.asarray(self.levels, dtype=float)
        if levels.ndim != 1 or levels.size == 0:
            raise InvalidStateError("energy levels must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(levels)):
            raise InvalidStateError("energy levels must be finite")
        if np.any(levels < 0):
            raise InvalidStateError("energy levels must be nonnegative")
        object.__setattr__(self, "levels", _frozen(levels))

    @classmethod
    @functools.lru_cache(maxsize=64)
    def ladder(cls, d: int, gap: float = 1.0) -> "EnergySpectrum":
        # immutable, so one shared instance per (d, gap) keeps the cached properties warm
        if d < 1:
            raise InvalidStateError("ladder dimension must be positive")
        return cls(np.arange(d, dtype=float) * gap)

    def __len__(self) -> int:
        return self.levels.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, EnergySpectrum):
            return NotImplemented
        return len(self) == len(other) and bool(np.array_equal(self.levels, other.levels))

    def __hash__(self) -> int:
        return hash(self.levels.tobytes())

    @functools.cached_property
    def is_sorted(self) -> bool:
        return bool(np.all(np.diff(self.levels) >= 0))

    @functools.cached_property
    def is_nondegenerate(self) -> bool:
        """Sorted and strictly increasing beyond the degeneracy tolerance."""
        return bool(np.all(np.diff(self.levels) > DEGENERACY_TOL))

    @functools.cached_property
    def is_ladder(self) -> bool:
        """Exactly ``(0, 1, ..., d-1)``."""
        return bool(np.array_equal(self.levels, np.arange(len(self), dtype=float)))

    def buckets(self) -> list[np.ndarray]:
        """Index groups of degenerate levels, ordered by increasing energy."""
        return list(self._buckets)

    @functools.cached_property
    def _buckets(self) -> tuple[np.ndarray, ...]:
        groups = bucket_by_energy(self.levels)
        for g in groups:
            g.setflags(write=False)
        return tuple(groups)


def bucket_by_energy(energies: np.ndarray, tol: float = DEGENERACY_TOL) -> list[np.ndarray]:
    """Group indices whose energies chain together within ``tol``."""
    energies = np.asarray(energies, dtype=float)
    order = np.argsort(energies, kind="stable")
    if order.size == 0:
        return []
    breaks = np.nonzero(np.diff(energies[order]) > tol)[0] + 1
    return np.split(order, breaks)


@dataclass(frozen=True, eq=False)
class DiagonalState:
    """Probability vector over the basis states of ``spectrum``."""

    probs: np.ndarray
    spectrum: EnergySpectrum

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1:
            raise InvalidStateError("probabilities must be a 1-d sequence")
        if not np.all(np.isfinite(probs)):
            raise InvalidStateError("probabilities must be finite")
        if np.any(probs < 0):
            raise InvalidStateError(f"negative probability in {probs.tolist()}")
        total = math.fsum(probs.tolist())
        if abs(total - 1.0) > PROB_TOL:
            raise InvalidStateError(f"probabilities sum to {total!r}, not 1")
        if len(self.spectrum) != probs.size:
            raise InvalidStateError(
                f"{probs.size} probabilities but {len(self.spectrum)} energy levels"
            )
        object.__setattr__(self, "probs", _frozen(probs))

    @classmethod
    def on_ladder(cls, probs: Sequence[float], gap: float = 1.0) -> "DiagonalState":
        return cls(np.asarray(probs, dtype=float), EnergySpectrum.ladder(len(probs), gap))

    @classmethod
    def uniform(cls, d: int) -> "DiagonalState":
        return cls.on_ladder(np.full(d, 1.0 / d))

    @classmethod
    def gibbs(cls, beta: float, spectrum: EnergySpectrum | int) -> "DiagonalState":
        """Thermal state ``exp(-beta E) / Z``; ``beta = inf`` gives the ground state."""
        if isinstance(spectrum, int):
            spectrum = EnergySpectrum.ladder(spectrum)
        levels = spectrum.levels
        if math.isinf(beta):
            ground = levels == levels.min()
            probs = ground / ground.sum()
        else:
            w = np.exp(-beta * (levels - levels.min()))
            probs = w / w.sum()
        return cls(probs, spectrum)

    @property
    def dim(self) -> int:
        return self.probs.size

    def __len__(self) -> int:
        return self.probs.size

    def __repr__(self) -> str:
        probs = ", ".join(f"{x:.6g}" for x in self.probs)
        if self.spectrum.is_ladder:
            return f"DiagonalState(({probs}))"
        levels = ", ".join(f"{x:.6g}" for x in self.spectrum.levels)
        return f"DiagonalState(({probs}), levels=({levels}))"


@dataclass(frozen=True)
class QubitBattery:
    """Two-level battery with populations ``(p0, p1)`` and level spacing ``gap``."""

    p0: float
    p1: float
    gap: float = 1.0

    def __post_init__(self):
        p0, p1 = float(self.p0), float(self.p1)
        if not (math.isfinite(p0) and math.isfinite(p1)):
            raise InvalidStateError("battery populations must be finite")
        if p0 < 0 or p1 < 0:
            raise InvalidStateError(f"negative battery population ({p0}, {p1})")
        if abs(p0 + p1 - 1.0) > PROB_TOL:
            raise InvalidStateError(f"battery populations sum to {p0 + p1!r}, not 1")
        if not self.gap > 0:
            raise InvalidStateError("battery gap must be positive")
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "gap", float(self.gap))

    @classmethod
    def from_probs(cls, probs: Iterable[float], gap: float = 1.0) -> "QubitBattery":
        p = list(probs)
        if len(p) != 2:
            raise InvalidStateError(f"a qubit battery needs 2 populations, got {len(p)}")
        return cls(p[0], p[1], gap)

    @property
    def is_passive(self) -> bool:
        return self.p0 >= self.p1 - PROB_TOL

    @property
    def beta(self) -> float:
        """Inverse temperature ``ln(p0/p1)/gap``; ``inf`` for the ground state."""
        if self.p1 == 0:
            return math.inf
        if self.p0 == 0:
            return -math.inf
        return math.log(self.p0 / self.p1) / self.gap

    @property
    def energy(self) -> float:
        return self.p1 * self.gap

    @property
    def entropy(self) -> float:
        return _entropy((self.p0, self.p1))

    def as_state(self) -> DiagonalState:
        return DiagonalState(np.array([self.p0, self.p1]), EnergySpectrum(np.array([0.0, self.gap])))

    def require_passive(self) -> None:
        if not self.is_passive:
            raise PreconditionError("battery must be passive (p0 >= p1)", f"got ({self.p0}, {self.p1})")


@dataclass(frozen=True, eq=False)
class JointDiagonalState:
    """Battery-charger product laid out row by row as in the two-column table.

    Entry ``i`` is the basis state ``|battery[i], charger[i]>`` with total
    energy ``energy[i]`` and occupation ``probability[i] = p_a * q_k``.
    """

    battery: np.ndarray
    charger: np.ndarray
    energy: np.ndarray
    probability: np.ndarray

    def __post_init__(self):
        for name in ("battery", "charger"):
            object.__setattr__(self, name, _frozen(getattr(self, name), dtype=int))
        for name in ("energy", "probability"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        if abs(math.fsum(self.probability.tolist()) - 1.0) > PROB_TOL:
            raise InvalidStateError("joint probabilities do not sum to 1")

    def __len__(self) -> int:
        return self.probability.size

    @property
    def entries(self) -> list[tuple[int, int, float, float]]:
        return list(zip(self.battery.tolist(), self.charger.tolist(),
                        self.energy.tolist(), self.probability.tolist()))

    def subspaces(self) -> list[np.ndarray]:
        """Index sets of equal total energy (the blocks an energy-conserving unitary may mix)."""
        return bucket_by_energy(self.energy)

    def battery_marginal(self) -> tuple[float, float]:
        p = self.probability.tolist()
        b = self.battery.tolist()
        return (math.fsum(x for x, a in zip(p, b) if a == 0),
                math.fsum(x for x, a in zip(p, b) if a == 1))


def joint_state(battery: QubitBattery, charger: DiagonalState) -> JointDiagonalState:
    """Occupation table of ``battery (x) charger``: all ground-battery rows, then excited."""
    d = charger.dim
    q = charger.probs
    bat = np.repeat([0, 1], d)
    chg = np.tile(np.arange(d), 2)
    energy = np.concatenate([charger.spectrum.levels, charger.spectrum.levels + battery.gap])
    prob = np.concatenate([battery.p0 * q, battery.p1 * q])
    return JointDiagonalState(bat, chg, energy, prob)


def mean_energy(state: DiagonalState) -> float:
    return math.fsum((state.probs * state.spectrum.levels).tolist())


def _entropy(probs) -> float:
    return -math.fsum(x * math.log(x) for x in probs if x > 0)


def shannon_entropy(state: DiagonalState) -> float:
    """Entropy in nats, with ``0 ln 0 = 0``."""
    return _entropy(state.probs.tolist())


def tensor(a: DiagonalState, b: DiagonalState) -> DiagonalState:
    """Product state; basis order is ``a``-major and energies add per basis state."""
    n = a.dim * b.dim
    if n > TENSOR_CAP:
        raise ValueError(f"tensor product would have {n} levels (cap {TENSOR_CAP})")
    probs = np.outer(a.probs, b.probs).ravel()
    levels = np.add.outer(a.spectrum.levels, b.spectrum.levels).ravel()
    return DiagonalState(probs, EnergySpectrum(levels))


def majorizes(p: DiagonalState | Sequence[float], q: DiagonalState | Sequence[float]) -> bool:
    """``p`` majorizes ``q``: every descending partial sum of ``p`` dominates ``q``'s."""
    pv = np.sort(np.asarray(getattr(p, "probs", p), dtype=float))[::-1]
    qv = np.sort(np.asarray(getattr(q, "probs", q), dtype=float))[::-1]
    if pv.size != qv.size:
        raise ValueError(f"dimension mismatch: {pv.size} vs {qv.size}")
    return bool(np.all(np.cumsum(pv) >= np.cumsum(qv) - PROB_TOL))
