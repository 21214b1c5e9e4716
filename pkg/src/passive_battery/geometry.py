"""Geometry of the passive-state polytope for a non-degenerate Hamiltonian.

The passive states over ``d`` sorted, distinct levels form a simplex with the
vertices ``e_j = (1/j, ..., 1/j, 0, ..., 0)``.  Its facets give diagonal
witness operators that flag active states.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import DEGENERACY_TOL, PROB_TOL, DiagonalState, PreconditionError

GIBBS_RTOL = 1e-9


def _require_nondegenerate(state: DiagonalState, what: str) -> None:
    if not state.spectrum.is_nondegenerate:
        raise PreconditionError(
            "non-degenerate sorted spectrum required",
            f"{what} is only defined for strictly increasing energies",
        )


def is_passive(state: DiagonalState) -> bool:
    """Populations never increase with energy: ``E_i > E_j`` implies ``q_i <= q_j``.

    Levels within the degeneracy tolerance are not constrained against each
    other.  Works for unsorted spectra (e.g. tensor products).
    """
    q = state.probs
    if state.spectrum.is_nondegenerate:
        return bool(np.all(q[1:] <= q[:-1] + PROB_TOL))
    groups = state.spectrum.buckets()
    for lower, upper in zip(groups, groups[1:]):
        if q[upper].max() > q[lower].min() + PROB_TOL:
            return False
    return True


def gibbs_parameter(state: DiagonalState) -> Optional[float]:
    """Inverse temperature of a thermal state, or ``None`` if the state is not thermal.

    The pure ground state reports ``math.inf`` and the maximally mixed state ``0``.
    """
    _require_nondegenerate(state, "gibbs_parameter")
    if not is_passive(state):
        raise PreconditionError("state must be passive", repr(state))
    q = state.probs
    if q[0] == 1.0 or (q[1:] == 0).all():
        return math.inf
    if (q == 0).any():
        return None
    betas = np.log(q[:-1] / q[1:]) / np.diff(state.spectrum.levels)
    beta = float(betas.mean())
    if all(math.isclose(b, beta, rel_tol=GIBBS_RTOL, abs_tol=PROB_TOL) for b in betas):
        return max(beta, 0.0)
    return None


def virtual_temperatures(state: DiagonalState) -> np.ndarray:
    """Per-gap inverse temperatures ``ln(q_k/q_{k+1}) / (E_{k+1} - E_k)``.

    A vanishing upper population gives ``inf``.  Across a degenerate gap with
    equal populations there is no temperature to assign and the entry is
    ``nan``; unequal populations there raise.
    """
    if not state.spectrum.is_sorted:
        raise PreconditionError("sorted spectrum required")
    q = state.probs
    levels = state.spectrum.levels
    out = np.empty(q.size - 1)
    for k in range(q.size - 1):
        gap = levels[k + 1] - levels[k]
        if gap <= DEGENERACY_TOL:
            if abs(q[k] - q[k + 1]) > PROB_TOL:
                raise PreconditionError(
                    "degenerate levels must carry equal populations",
                    f"levels {k} and {k + 1}",
                )
            out[k] = math.nan
        elif q[k + 1] == 0:
            out[k] = math.inf
        elif q[k] == 0:
            out[k] = -math.inf
        else:
            out[k] = math.log(q[k] / q[k + 1]) / gap
    return out


@dataclass(frozen=True, eq=False)
class VertexSet:
    dimension: int
    vertices: np.ndarray  # row j-1 holds e_j

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self) -> int:
        return self.dimension


def polytope_vertices(d: int) -> VertexSet:
    if d < 2:
        raise ValueError("the passive polytope needs d >= 2")
    v = np.zeros((d, d))
    for j in range(1, d + 1):
        v[j - 1, :j] = 1.0 / j
    v.setflags(write=False)
    return VertexSet(d, v)


def vertex_decomposition(state: DiagonalState) -> np.ndarray:
    """Barycentric weights ``c_j = j (q_{j-1} - q_j)`` with ``q_d = 0``.

    The polytope is a simplex, so these weights are unique and
    ``sum_j c_j e_j`` reproduces the state.
    """
    _require_nondegenerate(state, "vertex_decomposition")
    if not is_passive(state):
        raise PreconditionError("state must be passive", repr(state))
    q = np.append(state.probs, 0.0)
    j = np.arange(1, state.dim + 1)
    return j * (q[:-1] - q[1:])


def reconstruct(weights: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vertex_decomposition`."""
    weights = np.asarray(weights, dtype=float)
    return weights @ polytope_vertices(weights.size).vertices


@dataclass(frozen=True, eq=False)
class Witness:
    """Diagonal facet operator of the passive polytope.

    ``kind`` is ``"trivial"`` (entry 1 on the top level) or ``"adjacent"``
    (``+1`` at ``index``, ``-1`` at ``index + 1``, zero-based).
    """

    kind: str
    dimension: int
    index: int = -1

    @functools.cached_property
    def diagonal(self) -> np.ndarray:
        w = np.zeros(self.dimension)
        if self.kind == "trivial":
            w[-1] = 1.0
        else:
            w[self.index] = 1.0
            w[self.index + 1] = -1.0
        w.setflags(write=False)
        return w

    @property
    def label(self) -> str:
        if self.kind == "trivial":
            return "W_0"
        return f"W_{{{self.index + 1}{self.index + 2}}}"

    def __repr__(self) -> str:
        return f"Witness({self.label}, d={self.dimension})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Witness):
            return NotImplemented
        return (self.kind, self.dimension, self.index) == (other.kind, other.dimension, other.index)

    def __hash__(self) -> int:
        return hash((self.kind, self.dimension, self.index))


def trivial_witness(d: int) -> Witness:
    return Witness("trivial", d)


def adjacent_witness(d: int, i: int) -> Witness:
    if not 0 <= i < d - 1:
        raise ValueError(f"adjacent witness index {i} out of range for d={d}")
    return Witness("adjacent", d, i)


def facet_witnesses(d: int) -> list[Witness]:
    """The trivial witness followed by every adjacent-pair witness."""
    return list(_facet_witnesses(d))


@functools.lru_cache(maxsize=64)
def _facet_witnesses(d: int) -> tuple[Witness, ...]:
    return tuple([trivial_witness(d)] + [adjacent_witness(d, i) for i in range(d - 1)])


def evaluate_witness(w: Witness, state: DiagonalState) -> float:
    if w.dimension != state.dim:
        raise ValueError(f"witness of dimension {w.dimension} on a {state.dim}-level state")
    return math.fsum((w.diagonal * state.probs).tolist())


def detect_active(state: DiagonalState) -> Optional[Witness]:
    """Most strongly violated facet witness, or ``None`` for a passive state."""
    _require_nondegenerate(state, "detect_active")
    worst, worst_value = None, -PROB_TOL
    for w in facet_witnesses(state.dim):
        value = evaluate_witness(w, state)
        if value < worst_value:
            worst, worst_value = w, value
    return worst
