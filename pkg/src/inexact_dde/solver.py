"""Layered (method-of-steps) Euler scheme with exact or perturbed information."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import DelayGrid, LayeredTrajectory, sample_to_coarse
from .noise import NoiseMode, NoiseSpec, RngStream, perturb_initial, step_noise
from .rhs import TestProblem


class DivergenceError(ArithmeticError):
    """A trajectory produced a non-finite node; ``(j, k)`` is the first bad node."""

    def __init__(self, j: int, k: int, trial: int | None = None):
        self.j, self.k, self.trial = j, k, trial
        where = f" (trial {trial})" if trial is not None else ""
        super().__init__(f"Euler iteration diverged at layer j={j}, node k={k}{where}")


@dataclass(frozen=True)
class SolveRequest:
    problem: TestProblem
    grid: DelayGrid
    noise: NoiseSpec = NoiseSpec()
    trial_index: int = 0
    gamma_index: int = 0
    delta_index: int = 0
    n_index: int = 0

    def __post_init__(self):
        if self.trial_index < 0:
            raise ValueError("trial_index must be nonnegative")

    def stream(self) -> RngStream:
        return RngStream(self.noise.seed, self.trial_index, self.problem.id,
                         self.gamma_index, self.delta_index, self.n_index)


def _first_bad_node(values: np.ndarray) -> tuple[int, int]:
    bad = ~np.all(np.isfinite(values[1:]), axis=-1)
    j, k = np.argwhere(bad)[0]
    return int(j), int(k)


def integrate(problem: TestProblem, grid: DelayGrid, spec: NoiseSpec,
              eta0: np.ndarray, u: np.ndarray | None = None) -> np.ndarray:
    """Run the recursion for a batch of trajectories.

    ``eta0`` is the ``(B, d)`` array of (perturbed) history values and ``u``
    the ``(B, n+1, N, d)`` block of pre-drawn uniforms (UNIFORM_RANDOM only).
    Returns node values of shape ``(B, n+2, N+1, d)``; diverged rows hold
    non-finite entries from the first bad node onward.
    """
    f = problem.kernel()
    B, d = eta0.shape
    n, N, h = grid.n, grid.N, grid.h
    noisy = spec.active
    if noisy and spec.mode is NoiseMode.UNIFORM_RANDOM and u is None:
        raise ValueError("uniform noise requires pre-drawn samples")
    out = np.empty((B, n + 2, N + 1, d))
    out[:, 0] = eta0[:, None, :]
    with np.errstate(all="ignore"):
        for j in range(n + 1):
            prev, cur = out[:, j], out[:, j + 1]
            times = grid.layer_times(j)
            y = prev[:, N].copy()
            cur[:, 0] = y
            uj = u[:, j] if u is not None else None
            for k in range(N):
                z = prev[:, k]
                drift = f(times[k], y, z)
                if noisy:
                    drift = drift + step_noise(spec, uj[:, k] if uj is not None else None, y, z)
                y = y + h * drift
                cur[:, k + 1] = y
    return out


def _draw(spec: NoiseSpec, streams: Sequence[RngStream], eta, grid: DelayGrid):
    eta0 = np.stack([perturb_initial(spec, s, eta) for s in streams])
    u = None
    if spec.mode is NoiseMode.UNIFORM_RANDOM:
        shape = (grid.n + 1, grid.N, eta0.shape[1])
        u = np.stack([s.uniform(shape) for s in streams])
    return eta0, u


def euler_solve_batch(problem: TestProblem, grid: DelayGrid, spec: NoiseSpec,
                      streams: Sequence[RngStream]):
    """Solve one trajectory per stream.

    Returns a list with a :class:`LayeredTrajectory` or a
    :class:`DivergenceError` per stream, in input order.
    """
    eta0, u = _draw(spec, streams, problem.eta, grid)
    values = integrate(problem, grid, spec, eta0, u)
    results = []
    for b in range(len(streams)):
        if np.all(np.isfinite(values[b])):
            results.append(LayeredTrajectory(grid, values[b]))
        else:
            j, k = _first_bad_node(values[b])
            results.append(DivergenceError(j, k, streams[b].key[1]))
    return results


def euler_solve(req: SolveRequest) -> LayeredTrajectory:
    """Noisy (or exact, for ZERO noise) Euler trajectory; raises :class:`DivergenceError`."""
    if req.grid is None or req.problem is None:
        raise ValueError("request needs a problem and a grid")
    (res,) = euler_solve_batch(req.problem, req.grid, req.noise, [req.stream()])
    if isinstance(res, DivergenceError):
        raise res
    return res


def reference_solve(problem: TestProblem, coarse_grid: DelayGrid, R: int = 50) -> LayeredTrajectory:
    """Exact-information Euler solve on the ``R``-times refined grid, sampled back."""
    if int(R) != R or R < 1:
        raise ValueError(f"R must be a positive integer, got {R!r}")
    fine = euler_solve(SolveRequest(problem, coarse_grid.refine(R), NoiseSpec()))
    return sample_to_coarse(fine, coarse_grid, R)
