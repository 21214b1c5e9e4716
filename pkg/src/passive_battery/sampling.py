"""Random diagonal states: uniform on the passive polytope, on fixed-energy slices, and active.

Every generator is numpy's PCG64 seeded through ``SeedSequence``.  Batched
samplers draw in fixed-size blocks, block ``i`` seeded from ``(seed, i)``, so
the output does not depend on how many workers process the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from .core import PROB_TOL, DiagonalState, PreconditionError

BLOCK = 10_000
MAX_REJECTION_ROUNDS = 10_000


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *stream])))


def uniform_simplex(d: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points on the probability simplex via normalized exponential spacings."""
    x = rng.standard_exponential((size, d))
    return x / x.sum(axis=1, keepdims=True)


def _blocked(draw: Callable[[int, np.random.Generator], np.ndarray], size: int, seed: int,
             workers: int = 1) -> np.ndarray:
    sizes = [BLOCK] * (size // BLOCK) + ([size % BLOCK] if size % BLOCK else [])

    def run(i: int) -> np.ndarray:
        return draw(sizes[i], make_rng(seed, i))

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]
    if not parts:
        return np.empty((0, 0))
    return np.concatenate(parts)


def passive_samples(d: int, size: int, seed: int, workers: int = 1) -> np.ndarray:
    """``size`` rows uniform on the ``d``-level passive polytope (ladder ordering)."""
    if d < 2:
        raise ValueError("d must be at least 2")
    return _blocked(lambda n, rng: -np.sort(-uniform_simplex(d, n, rng), axis=1), size, seed, workers)


def sample_passive(d: int, seed: int) -> DiagonalState:
    return DiagonalState.on_ladder(passive_samples(d, 1, seed)[0])


def _fixed_energy_box(d: int, energy: float) -> np.ndarray:
    """Upper bounds of the free coordinates ``q_2 .. q_{d-1}``."""
    i = np.arange(2, d)
    return np.minimum(1.0 / (i + 1), energy / i)


def _fixed_energy_block(d: int, energy: float, n: int, rng: np.random.Generator) -> np.ndarray:
    if n == 0:
        return np.empty((0, d))
    hi = _fixed_energy_box(d, energy)
    out, have = [], 0
    for _ in range(MAX_REJECTION_ROUNDS):
        free = rng.random((max(2 * (n - have), 64), d - 2)) * hi
        q1 = energy - free @ np.arange(2, d)
        q0 = 1.0 - q1 - free.sum(axis=1)
        q = np.column_stack([q0, q1, free])
        ok = np.all(q[:, 1:] >= 0, axis=1) & np.all(q[:, :-1] >= q[:, 1:], axis=1)
        q = q[ok][: n - have]
        out.append(q)
        have += len(q)
        if have == n:
            return np.concatenate(out)
    raise RuntimeError(f"rejection sampling at energy {energy} did not converge")


def fixed_energy_samples(d: int, energy: float, size: int, seed: int, workers: int = 1) -> np.ndarray:
    """Uniform samples of the passive ladder states with mean energy ``energy``.

    The free coordinates ``q_2 .. q_{d-1}`` are drawn in their bounding box;
    ``q_1`` is solved from the energy and ``q_0`` from normalization, then
    non-passive rows are rejected.  The projection is linear, so uniform in
    the box conditioned on acceptance is uniform on the slice.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    top = (d - 1) / 2
    if not -PROB_TOL <= energy <= top + PROB_TOL:
        raise PreconditionError("energy infeasible for passive states",
                                f"need 0 <= E <= {top:g} for d={d}, got {energy}")
    energy = min(max(energy, 0.0), top)
    if d == 2:
        return np.tile([1.0 - energy, energy], (size, 1))
    if energy <= PROB_TOL:
        return np.tile(np.eye(d)[0], (size, 1))
    if math.isclose(energy, top, abs_tol=PROB_TOL):
        return np.full((size, d), 1.0 / d)
    return _blocked(lambda n, rng: _fixed_energy_block(d, energy, n, rng), size, seed, workers)


def sample_passive_fixed_energy(d: int, energy: float, seed: int) -> DiagonalState:
    return DiagonalState.on_ladder(fixed_energy_samples(d, energy, 1, seed)[0])


def active_samples(d: int, size: int, seed: int, return_draws: bool = False):
    """Uniform simplex points conditioned on not being passive.

    With ``return_draws`` the number of simplex draws consumed is returned
    too, giving the acceptance rate ``size / draws`` (about ``1 - 1/d!``).
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    rng = make_rng(seed)
    out, have, draws = [], 0, 0
    while have < size:
        batch = uniform_simplex(d, max(2 * (size - have), 16), rng)
        passive = np.all(batch[:, :-1] >= batch[:, 1:] - PROB_TOL, axis=1)
        accepted = np.nonzero(~passive)[0]
        need = size - have
        if len(accepted) > need:
            # count draws only up to the last accepted row actually used
            draws += int(accepted[need - 1]) + 1
            accepted = accepted[:need]
        else:
            draws += len(batch)
        out.append(batch[accepted])
        have += len(accepted)
    samples = np.concatenate(out) if out else np.empty((0, d))
    return (samples, draws) if return_draws else samples


def sample_active_diagonal(d: int, seed: int) -> DiagonalState:
    return DiagonalState.on_ladder(active_samples(d, 1, seed)[0])


def slice_bounds_3(energy: float) -> tuple[float, float]:
    """Range of ``q_2`` on the ``d = 3`` slice at ``energy``: ``q_1 = E - 2 q_2``, ``q_0 = 1 - E + q_2``."""
    if not 0 <= energy <= 1:
        raise PreconditionError("energy infeasible for passive states", f"E = {energy}")
    # q1 >= q2 gives q2 <= E/3; q0 >= q1 gives q2 >= (2E - 1)/3
    return max(0.0, (2 * energy - 1) / 3), energy / 3
