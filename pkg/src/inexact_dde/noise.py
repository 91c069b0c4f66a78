"""Inexact information: perturbations of the right-hand side and of the history.

Every perturbation satisfies ``|delta_f(t, y, z)| <= delta (1 + |y|)(1 + |z|)``
and ``|eta~ - eta| <= delta``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .rhs import ProblemId, TestProblem, eval_rhs

GENERATOR_ID = (
    f"numpy.random.Philox(SeedSequence(entropy=seed, "
    f"spawn_key=(trial, problem, gamma_idx, delta_idx, N_idx))) numpy={np.__version__}"
)


class NoiseMode(enum.Enum):
    ZERO = "zero"
    UNIFORM_RANDOM = "uniform"
    WORST_CASE_CONST = "worst"

    @classmethod
    def parse(cls, key) -> "NoiseMode":
        if isinstance(key, cls):
            return key
        try:
            return cls(str(key).strip().lower())
        except ValueError:
            raise ValueError(f"unknown noise mode {key!r}; expected zero, uniform or worst") from None


@dataclass(frozen=True)
class NoiseSpec:
    delta: float = 0.0
    mode: NoiseMode = NoiseMode.ZERO
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mode", NoiseMode.parse(self.mode))
        if not (0.0 <= self.delta <= 1.0):
            raise ValueError(f"noise.delta must lie in [0, 1], got {self.delta!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValueError(f"noise.seed must be an unsigned 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, "delta", float(self.delta))
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def active(self) -> bool:
        """Whether any perturbation can be nonzero."""
        return self.mode is not NoiseMode.ZERO and self.delta > 0.0


class RngStream:
    """Reproducible uniform(-1, 1) stream owned by one trajectory.

    The stream depends only on its construction tuple, never on what other
    streams have drawn.  Bulk draws equal the concatenation of single draws.
    """

    def __init__(self, seed: int, trial: int = 0, problem=ProblemId.F1,
                 gamma_index: int = 0, delta_index: int = 0, n_index: int = 0):
        pid = ProblemId.parse(problem)
        self.key = (int(seed), int(trial), pid.index, int(gamma_index), int(delta_index), int(n_index))
        ss = np.random.SeedSequence(entropy=self.key[0], spawn_key=self.key[1:])
        self._gen = np.random.Generator(np.random.Philox(ss))

    def uniform(self, size=None):
        return self._gen.uniform(-1.0, 1.0, size)


def _e1(d: int) -> np.ndarray:
    e = np.zeros(d)
    e[0] = 1.0
    return e


def perturb_initial(spec: NoiseSpec, stream: RngStream | None, eta) -> np.ndarray:
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    d = eta.shape[0]
    if spec.mode is NoiseMode.UNIFORM_RANDOM:
        u = stream.uniform(d)  # drawn even at delta = 0 so later draws do not depend on delta
        if spec.delta > 0.0:
            return eta + spec.delta * u / math.sqrt(d)
    elif spec.mode is NoiseMode.WORST_CASE_CONST and spec.delta > 0.0:
        return eta + spec.delta * _e1(d)
    return eta.copy()


def step_noise(spec: NoiseSpec, u, y, z) -> np.ndarray:
    """Vectorised perturbation for states ``y, z`` of shape ``(..., d)``.

    ``u`` holds pre-drawn uniforms of the same shape (ignored unless the mode
    is UNIFORM_RANDOM).
    """
    if not spec.active:
        return np.zeros_like(y)
    d = y.shape[-1]
    if d == 1:
        ny, nz = np.abs(y), np.abs(z)
    else:
        ny = np.linalg.norm(y, axis=-1, keepdims=True)
        nz = np.linalg.norm(z, axis=-1, keepdims=True)
    if spec.mode is NoiseMode.UNIFORM_RANDOM:
        return spec.delta * (1.0 + ny + nz) / math.sqrt(d) * u
    mag = spec.delta * (1.0 + ny) * (1.0 + nz)
    out = np.zeros_like(y)
    out[..., :1] = mag
    return out


def sample_step_noise(spec: NoiseSpec, stream: RngStream | None, t: float, y, z) -> np.ndarray:
    """One perturbation sample at ``(t, y, z)``; consumes ``d`` uniforms in UNIFORM_RANDOM mode."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if not math.isfinite(t) or not np.all(np.isfinite(y)) or not np.all(np.isfinite(z)):
        raise ValueError("sample_step_noise requires finite t, y and z")
    u = stream.uniform(y.shape[0]) if spec.mode is NoiseMode.UNIFORM_RANDOM else None
    out = step_noise(spec, u, y, z)
    assert np.linalg.norm(out) <= noise_bound(spec.delta, y, z) * (1 + 1e-12), "noise bound violated"
    return out


def noise_bound(delta: float, y, z) -> float:
    """Admissible magnitude ``delta (1 + |y|)(1 + |z|)``."""
    return delta * (1.0 + float(np.linalg.norm(y))) * (1.0 + float(np.linalg.norm(z)))


def perturbed_eval(problem: TestProblem, spec: NoiseSpec, stream: RngStream | None, t: float, y, z) -> np.ndarray:
    return eval_rhs(problem, t, y, z) + sample_step_noise(spec, stream, t, y, z)
