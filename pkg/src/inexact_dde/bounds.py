"""Error-bound shapes and the discrete Groenwall estimate.

Envelopes are shapes only: a bound reads ``C * envelope(...)`` with an
unknown constant, which :func:`fit_envelope_constant` estimates from data.
Powers follow the convention ``0**p = 0`` for ``p > 0``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable


class Regime(enum.Enum):
    LIPSCHITZ = "lipschitz"
    HOLDER_GAMMA1 = "holder_gamma1"
    HOLDER_GAMMA_LT1 = "holder_gamma_lt1"


def _exponent(name, value):
    if not (0.0 < value <= 1.0) or not math.isfinite(value):
        raise ValueError(f"{name} must lie in (0, 1], got {value!r}")
    return float(value)


@dataclass(frozen=True)
class EnvelopeSpec:
    regime: Regime
    alpha: float = 1.0
    beta1: float = 1.0
    beta2: float = 1.0
    gamma: float = 1.0
    j: int = 0

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        for name in ("alpha", "beta1", "beta2", "gamma"):
            object.__setattr__(self, name, _exponent(name, getattr(self, name)))
        if int(self.j) != self.j or self.j < 0:
            raise ValueError(f"layer index j must be a nonnegative integer, got {self.j!r}")
        if self.regime is Regime.HOLDER_GAMMA_LT1 and self.gamma >= 1.0:
            raise ValueError("HOLDER_GAMMA_LT1 requires gamma < 1")


def _check_hd(h, delta):
    if not (h > 0) or not math.isfinite(h):
        raise ValueError(f"h must be positive, got {h!r}")
    if not (0.0 <= delta <= 1.0):
        raise ValueError(f"delta must lie in [0, 1], got {delta!r}")


def _delta_sum(delta: float, gamma: float, upper: int) -> float:
    return math.fsum(delta ** (gamma ** l) for l in range(upper + 1))


def envelope(spec: EnvelopeSpec, h: float, delta: float) -> float:
    """Interpolated-error bound shape for one layer (or globally for Lipschitz f)."""
    _check_hd(h, delta)
    a, b1, b2, g = spec.alpha, spec.beta1, spec.beta2, spec.gamma
    if spec.regime is Regime.LIPSCHITZ:
        return h + delta
    if spec.regime is Regime.HOLDER_GAMMA1:
        return math.fsum((h ** 0.5, h ** a, h ** b1, h ** b2, delta))
    ag = min(a, g)
    if spec.j == 0:
        return math.fsum((h ** ag, h ** b1, h ** b2, h ** 0.5, delta ** g))
    terms = []
    for l in range(1, spec.j + 1):
        gl = g ** l
        terms += [h ** (gl / 2), h ** (gl * ag), h ** (b1 * gl), h ** (b2 * gl)]
    return math.fsum(terms) + _delta_sum(delta, g, spec.j + 2)


def grid_error_envelope(gamma: float, j: int, h: float, delta: float) -> float:
    """Bound shape for ``max_k |y_k^j - y~_k^j|`` (noiseless vs noisy nodes).

    For ``gamma < 1`` and ``j >= 1`` this is
    ``sum_{l=0}^{j} h**(gamma**l / 2) + sum_{l=0}^{j+1} delta**(gamma**l)``.
    """
    gamma = _exponent("gamma", gamma)
    _check_hd(h, delta)
    if int(j) != j or j < 0:
        raise ValueError(f"j must be a nonnegative integer, got {j!r}")
    if gamma == 1.0:
        return h ** 0.5 + delta
    if j == 0:
        return h ** 0.5 + delta ** gamma
    return math.fsum(h ** (gamma ** l / 2) for l in range(j + 1)) + _delta_sum(delta, gamma, j + 1)


def fit_envelope_constant(observed: Iterable[tuple[float, float, float]], spec: EnvelopeSpec) -> float:
    """Smallest ``C`` with ``error <= C * envelope(spec, h, delta)`` on all observations."""
    ratios = []
    for h, delta, err in observed:
        env = envelope(spec, h, delta)
        if env > 0:
            ratios.append(err / env)
    if not ratios:
        raise ValueError("no observations with a positive envelope")
    return max(ratios)


def discrete_gronwall_bound(A: float, B: float, xi0: float, n: int) -> float:
    """``A**n * xi0 + C_n`` with ``C_n = B (A**n - 1)/(A - 1)``, or ``n B`` if ``A == 1``.

    Bounds ``|xi_n|`` for any sequence with ``|xi_{k+1}| <= A |xi_k| + B``.
    """
    if A < 0 or B < 0 or xi0 < 0:
        raise ValueError("A, B and xi0 must be nonnegative")
    if int(n) != n or n < 0:
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    n = int(n)
    if A == 1.0:
        return xi0 + n * B
    if n == 0:
        return xi0
    if A == 0.0:
        return B
    if abs(A - 1.0) < 0.5:
        # expm1/log1p avoid cancellation in (A**n - 1)/(A - 1) for A near 1
        s = n * math.log1p(A - 1.0)
        An, geom = math.exp(s), math.expm1(s) / (A - 1.0)
    else:
        try:
            An = A ** n
        except OverflowError:
            return math.inf
        geom = (An - 1.0) / (A - 1.0)
    return An * xi0 + B * geom
