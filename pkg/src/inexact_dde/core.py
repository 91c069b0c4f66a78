"""Layered time grids, trajectories and their piecewise-linear interpolants.

A constant-delay problem on ``[0, (n+1)tau]`` is discretised layer by layer:
layer ``j`` covers ``[j*tau, (j+1)*tau]`` with nodes ``t_k^j = j*tau + k*h``,
``k = 0..N``.  Layer ``-1`` is the prescribed (constant) history.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class DelayGrid:
    """Uniform layered mesh with ``N`` steps per delay interval."""

    tau: float
    n: int
    N: int
    h: float = field(init=False)

    def __post_init__(self):
        if not isinstance(self.tau, (int, float, np.floating)) or not math.isfinite(self.tau):
            raise ValueError(f"tau must be a finite real, got {self.tau!r}")
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau!r}")
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"n must be a nonnegative integer, got {self.n!r}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "tau", float(self.tau))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "h", self.tau / self.N)

    @property
    def horizon(self) -> float:
        return (self.n + 1) * self.tau

    @property
    def n_layers(self) -> int:
        """Number of computed layers (``0..n``), history excluded."""
        return self.n + 1

    def node_time(self, j: int, k: int) -> float:
        # k == N is pinned to the next layer start so that layers share endpoints exactly
        if not -1 <= j <= self.n or not 0 <= k <= self.N:
            raise IndexError(f"node ({j}, {k}) outside grid")
        if k == self.N:
            return (j + 1) * self.tau
        return j * self.tau + k * self.h

    def layer_times(self, j: int) -> np.ndarray:
        t = j * self.tau + np.arange(self.N + 1) * self.h
        t[-1] = (j + 1) * self.tau
        return t

    def refine(self, R: int) -> "DelayGrid":
        return DelayGrid(self.tau, self.n, self.N * R)


def build_grid(tau: float, n: int, N: int) -> DelayGrid:
    return DelayGrid(tau, n, N)


@dataclass(frozen=True, eq=False)
class LayeredTrajectory:
    """Node values ``y_k^j`` for ``j = -1..n``, ``k = 0..N``.

    ``values`` has shape ``(n + 2, N + 1, d)``; row 0 is the history layer.
    The array is made read-only on construction.
    """

    grid: DelayGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim == 2:
            values = values[..., None]
        expected = (self.grid.n + 2, self.grid.N + 1)
        if values.ndim != 3 or values.shape[:2] != expected:
            raise ValueError(f"values must have shape {expected + ('d',)}, got {values.shape}")
        if values.shape[2] < 1:
            raise ValueError("state dimension must be positive")
        if not np.all(np.isfinite(values)):
            raise ValueError("trajectory contains non-finite values")
        if not np.all(values[0] == values[0, 0]):
            raise ValueError("history layer must be constant")
        if not np.array_equal(values[1:, 0], values[:-1, -1]):
            raise ValueError("layers are not continuous: y_0^j != y_N^(j-1)")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def d(self) -> int:
        return self.values.shape[2]

    def layer(self, j: int) -> np.ndarray:
        """Node values of layer ``j`` as an ``(N+1, d)`` array."""
        if not -1 <= j <= self.grid.n:
            raise IndexError(f"layer {j} outside grid")
        return self.values[j + 1]

    def node(self, j: int, k: int) -> np.ndarray:
        return self.layer(j)[k]

    def max_norm(self) -> float:
        """Largest Euclidean node norm over the computed layers ``0..n``."""
        return float(np.max(np.linalg.norm(self.values[1:], axis=-1)))

    def same_as(self, other: "LayeredTrajectory") -> bool:
        """Bit-level equality of grids and node values."""
        return (self.grid == other.grid and self.values.shape == other.values.shape
                and self.values.tobytes() == other.values.tobytes())


class Interpolant:
    """Piecewise-linear interpolant of a layered trajectory on ``[-tau, (n+1)tau]``."""

    def __init__(self, trajectory: LayeredTrajectory):
        self.trajectory = trajectory
        grid = trajectory.grid
        self.grid = grid
        # global knot sequence; shared layer endpoints appear once
        times = [grid.layer_times(j)[:-1] for j in range(-1, grid.n + 1)]
        times.append(np.array([grid.horizon]))
        self._t = np.concatenate(times)
        vals = trajectory.values[:, :-1, :].reshape(-1, trajectory.d)
        self._y = np.concatenate([vals, trajectory.values[-1, -1:, :]])

    def __call__(self, t):
        return interpolant_eval(self, t)


def interpolant_eval(interp: Interpolant, t):
    """Evaluate the interpolant at scalar ``t`` (returns ``(d,)``) or an array of times."""
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    t_arr = np.atleast_1d(t_arr)
    lo, hi = -interp.grid.tau, interp.grid.horizon
    if not np.all(np.isfinite(t_arr)) or np.any(t_arr < lo) or np.any(t_arr > hi):
        raise ValueError(f"t must lie in [{lo}, {hi}]")
    knots, y = interp._t, interp._y
    idx = np.clip(np.searchsorted(knots, t_arr, side="right") - 1, 0, len(knots) - 2)
    theta = (t_arr - knots[idx]) / (knots[idx + 1] - knots[idx])
    theta = theta[:, None]
    out = (1.0 - theta) * y[idx] + theta * y[idx + 1]
    return out[0] if scalar else out


def sample_to_coarse(fine: LayeredTrajectory, coarse_grid: DelayGrid, R: int) -> LayeredTrajectory:
    """Restrict a trajectory on the ``R``-times refined grid to ``coarse_grid``.

    Coarse node ``(j, k)`` is fine node ``(j, R*k)``; nodes align exactly.
    """
    fg = fine.grid
    if int(R) != R or R < 1:
        raise ValueError(f"R must be a positive integer, got {R!r}")
    if fg.tau != coarse_grid.tau or fg.n != coarse_grid.n:
        raise ValueError("fine and coarse grids differ in tau or n")
    if fg.N != R * coarse_grid.N:
        raise ValueError(f"fine grid has {fg.N} steps per layer, expected {R} * {coarse_grid.N}")
    return LayeredTrajectory(coarse_grid, fine.values[:, ::R, :])
