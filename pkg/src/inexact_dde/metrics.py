"""Error functionals over delay intervals and empirical rate estimation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import DelayGrid, LayeredTrajectory


@dataclass(frozen=True, eq=False)
class ErrorProfile:
    """Per-layer errors between two trajectories on a common grid.

    ``grid_max[j]`` is the largest node error on layer ``j``; ``E_loc[j]`` the
    sup of the interpolant difference on ``[j tau, (j+1) tau]`` and ``E_cum[j]``
    the sup over ``[0, (j+1) tau]``.
    """

    grid_max: np.ndarray
    E_loc: np.ndarray
    E_cum: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.E_cum) < 0):
            raise AssertionError("E_cum must be nondecreasing")

    @property
    def global_error(self) -> float:
        return float(self.E_cum[-1])

    @classmethod
    def from_layer_maxima(cls, grid_max) -> "ErrorProfile":
        grid_max = np.asarray(grid_max, dtype=float)
        # the difference of two piecewise-linear interpolants on one mesh peaks at a node
        return cls(grid_max, grid_max.copy(), np.maximum.accumulate(grid_max))


def layer_maxima(a_values: np.ndarray, b_values: np.ndarray) -> np.ndarray:
    """Max node error per computed layer; works on ``(..., n+2, N+1, d)`` stacks."""
    err = np.linalg.norm(a_values[..., 1:, :, :] - b_values[..., 1:, :, :], axis=-1)
    return err.max(axis=-1)


def error_profile(a: LayeredTrajectory, b: LayeredTrajectory, grid: DelayGrid | None = None) -> ErrorProfile:
    grid = grid or a.grid
    if a.grid != grid or b.grid != grid:
        raise ValueError("trajectories must live on the given grid")
    if a.d != b.d:
        raise ValueError(f"dimension mismatch: {a.d} vs {b.d}")
    return ErrorProfile.from_layer_maxima(layer_maxima(a.values, b.values))


def _loglog_slope(points) -> float:
    h = np.array([p[0] for p in points], dtype=float)
    e = np.array([p[1] for p in points], dtype=float)
    if np.any(e == 0.0):
        return math.nan
    x, y = np.log(h), np.log(e)
    x = x - x.mean()
    return float(np.dot(x, y - y.mean()) / np.dot(x, x))


def _validate(points, count: int, name: str):
    pts = [(float(h), float(e)) for h, e in points]
    if len(pts) < 2:
        raise ValueError("at least two (h, error) points are required")
    if int(count) != count or not 2 <= count <= len(pts):
        raise ValueError(f"{name} must be an integer in [2, {len(pts)}], got {count!r}")
    if any(h <= 0 or not math.isfinite(h) for h, _ in pts):
        raise ValueError("step sizes must be positive and finite")
    if any(e < 0 or not math.isfinite(e) for _, e in pts):
        raise ValueError("errors must be nonnegative and finite")
    if len({h for h, _ in pts}) < 2:
        raise ValueError("need at least two distinct step sizes")
    return sorted(pts, key=lambda p: p[0])


def estimate_order(points: Sequence[tuple[float, float]], window: int | None = None) -> float:
    """Least-squares slope of log(error) vs log(h) over the ``window`` largest h.

    Returns NaN if any error in the window is zero.
    """
    pts = _validate(points, window if window is not None else len(points), "window")
    window = window if window is not None else len(pts)
    return _loglog_slope(pts[-window:])


def detect_plateau(points: Sequence[tuple[float, float]], tail: int = 4,
                   slope_tol: float = 0.15) -> tuple[bool, float]:
    """Plateau test on the ``tail`` smallest step sizes.

    Returns ``(|slope| < slope_tol, geometric mean of the tail errors)``.  A
    tail containing a zero error never counts as a plateau (level 0).
    """
    pts = _validate(points, tail, "tail")[:tail]
    slope = _loglog_slope(pts)
    if math.isnan(slope):
        return False, 0.0
    level = math.exp(math.fsum(math.log(e) for _, e in pts) / len(pts))
    return abs(slope) < slope_tol, level


def plateau_slope(points: Sequence[tuple[float, float]], tail: int = 4) -> float:
    pts = _validate(points, tail, "tail")[:tail]
    return _loglog_slope(pts)
