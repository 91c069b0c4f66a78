"""Right-hand sides: the scalar catalog f1..f4 and a Lipschitz benchmark.

All kernels are vectorised over leading axes: ``y`` and ``z`` are arrays of
shape ``(..., d)`` and ``t`` is a scalar.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

ETA_CATALOG = 0.05854


class ProblemId(enum.Enum):
    F1 = "f1"
    F2 = "f2"
    F3 = "f3"
    F4 = "f4"
    LIP_BENCH = "lip"

    @classmethod
    def parse(cls, key) -> "ProblemId":
        if isinstance(key, cls):
            return key
        try:
            return cls(str(key).strip().lower())
        except ValueError:
            names = ", ".join(p.value for p in cls)
            raise ValueError(f"unknown problem {key!r}; expected one of {names}") from None

    @property
    def index(self) -> int:
        return list(ProblemId).index(self)


@dataclass(frozen=True)
class Regularity:
    """Hoelder exponents (alpha, beta1, beta2, gamma) of the right-hand side."""

    alpha: float
    beta1: float
    beta2: float
    gamma: float


@dataclass(frozen=True, eq=False)
class TestProblem:
    __test__ = False  # not a pytest class

    id: ProblemId
    gamma: float
    eta: np.ndarray
    params: Mapping[str, float] = field(default_factory=dict)
    regularity: Regularity | None = None

    def __post_init__(self):
        if not (0.0 < self.gamma <= 1.0):
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma!r}")
        eta = np.atleast_1d(np.array(self.eta, dtype=float))
        if eta.ndim != 1 or not np.all(np.isfinite(eta)):
            raise ValueError("eta must be a finite vector")
        if any(not math.isfinite(v) for v in self.params.values()):
            raise ValueError("problem parameters must be finite")
        eta.setflags(write=False)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    @property
    def d(self) -> int:
        return self.eta.shape[0]

    @property
    def key(self) -> str:
        return self.id.value

    def kernel(self):
        """Unchecked vectorised ``f(t, y, z)``; the solver's hot path."""
        fn = _KERNELS[self.id]
        params, gamma = dict(self.params), self.gamma
        return lambda t, y, z: fn(t, y, z, gamma, params)


def _powabs(x, p):
    # |x|^p with |0|^p = 0 for p > 0
    return np.abs(x) ** p


def _f1(t, y, z, gamma, p):
    zg = _powabs(z, gamma)
    return (p["A"] - p["B"] * y - p["C"] * np.sign(y) * _powabs(y, p["rho1"]) * zg
            + p["D"] * y * zg)


def _f2(t, y, z, gamma, p):
    return (math.sin(t) + p["c"] * _powabs(z, gamma) - p["a"] * y
            - (1.0 + np.abs(z)) * np.maximum(y, 0.0) ** p["beta"])


def _f3(t, y, z, gamma, p):
    return (math.sin(t) + p["c"] * np.sign(z) * _powabs(z, gamma) - p["a"] * y
            - (1.0 + np.abs(z)) * np.sign(y) * _powabs(y, p["beta"]))


def _f4(t, y, z, gamma, p):
    return 3.0 * np.sign(z) * _powabs(z, gamma) * math.sin(p["lam"] * t)


def _lip(t, y, z, gamma, p):
    return np.array(z, dtype=float)


_KERNELS = {
    ProblemId.F1: _f1,
    ProblemId.F2: _f2,
    ProblemId.F3: _f3,
    ProblemId.F4: _f4,
    ProblemId.LIP_BENCH: _lip,
}

_PARAMS = {
    ProblemId.F1: {"A": 1.7137, "B": 0.7769, "C": 0.5895, "D": -0.82615, "rho1": 0.973},
    ProblemId.F2: {"beta": 0.7, "a": 0.2, "c": 2.0},
    ProblemId.F3: {"beta": 0.7, "a": 0.2, "c": 2.0},
    ProblemId.F4: {"lam": 1.0},
    ProblemId.LIP_BENCH: {},
}


def _regularity(pid: ProblemId, gamma: float) -> Regularity:
    if pid is ProblemId.F1:
        return Regularity(1.0, _PARAMS[pid]["rho1"], 1.0, gamma)
    if pid in (ProblemId.F2, ProblemId.F3):
        return Regularity(1.0, _PARAMS[pid]["beta"], 1.0, gamma)
    if pid is ProblemId.F4:
        return Regularity(1.0, 1.0, 1.0, gamma)
    return Regularity(1.0, 1.0, 1.0, 1.0)


def make_test_problem(id, gamma: float = 1.0, eta=None, regularity: Regularity | None = None) -> TestProblem:
    """Build a catalog problem.

    ``eta`` may only be overridden for the Lipschitz benchmark (default 1);
    a vector ``eta`` gives a ``d``-dimensional benchmark.  ``regularity``
    replaces the stored exponent metadata.
    """
    pid = ProblemId.parse(id)
    gamma = float(gamma)
    if not (0.0 < gamma <= 1.0) or not math.isfinite(gamma):
        raise ValueError(f"gamma must lie in (0, 1], got {gamma!r}")
    if pid is ProblemId.LIP_BENCH:
        gamma = 1.0
        eta = 1.0 if eta is None else eta
    elif eta is not None:
        raise ValueError(f"eta is fixed at {ETA_CATALOG} for catalog problem {pid.value}")
    else:
        eta = ETA_CATALOG
    return TestProblem(pid, gamma, eta, _PARAMS[pid], regularity or _regularity(pid, gamma))


def eval_rhs(problem: TestProblem, t: float, y, z) -> np.ndarray:
    """Evaluate ``f(t, y, z)`` for single states ``y, z`` in R^d."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if not math.isfinite(t) or not np.all(np.isfinite(y)) or not np.all(np.isfinite(z)):
        raise ValueError("eval_rhs requires finite t, y and z")
    if y.shape != (problem.d,) or z.shape != (problem.d,):
        raise ValueError(f"y and z must have shape ({problem.d},)")
    return np.asarray(problem.kernel()(float(t), y, z), dtype=float)


def closed_form_lip(t: float, tau: float, eta: float, n: int) -> float:
    """Exact solution of ``z'(t) = z(t - tau)`` with constant history ``eta``.

    On ``[j*tau, (j+1)*tau]`` the solution is
    ``eta * sum_{i=0}^{j+1} (t - (i-1)*tau)**i / i!``.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    if not (0.0 <= t <= (n + 1) * tau):
        raise ValueError(f"t must lie in [0, {(n + 1) * tau}], got {t!r}")
    j = min(int(math.floor(t / tau)), n)
    return eta * math.fsum((t - (i - 1) * tau) ** i / math.factorial(i) for i in range(j + 2))
