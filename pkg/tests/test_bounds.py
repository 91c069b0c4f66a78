import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from inexact_dde import EnvelopeSpec, Regime, discrete_gronwall_bound, envelope, fit_envelope_constant
from inexact_dde import grid_error_envelope

LIP = EnvelopeSpec(Regime.LIPSCHITZ)


def test_lipschitz_envelope():
    assert envelope(LIP, 0.01, 0.05) == pytest.approx(0.06, rel=1e-15)


def test_holder_gamma1_envelope():
    assert envelope(EnvelopeSpec(Regime.HOLDER_GAMMA1), 0.01, 0.0) == pytest.approx(0.13, rel=1e-12)


def test_holder_gamma_lt1_envelope():
    spec = EnvelopeSpec(Regime.HOLDER_GAMMA_LT1, 1.0, 1.0, 1.0, 0.5, j=1)
    # 2*0.04**0.25 + 2*0.04**0.5 + 0.01 + 0.01**0.5 + 0.01**0.25 + 0.01**0.125 (mpmath, 30 digits)
    assert envelope(spec, 0.04, 0.01) == pytest.approx(2.28299628220710289215850986171, rel=1e-12)


def test_holder_gamma_lt1_layer0():
    spec = EnvelopeSpec(Regime.HOLDER_GAMMA_LT1, 0.8, 0.7, 1.0, 0.5, j=0)
    h, d = 0.09, 0.16
    assert envelope(spec, h, d) == pytest.approx(h ** 0.5 + h ** 0.7 + h + h ** 0.5 + d ** 0.5, rel=1e-14)


def test_grid_envelope_examples():
    assert grid_error_envelope(1.0, 3, 0.04, 0.1) == pytest.approx(0.3, rel=1e-14)
    assert grid_error_envelope(0.3, 0, 0.04, 0.0) == pytest.approx(0.2, rel=1e-15)
    assert grid_error_envelope(0.5, 1, 0.01, 0.04) == pytest.approx(1.10344136151679587248172408819, rel=1e-12)


def test_invalid_specs():
    with pytest.raises(ValueError):
        EnvelopeSpec(Regime.HOLDER_GAMMA_LT1, gamma=1.0)
    with pytest.raises(ValueError):
        EnvelopeSpec(Regime.HOLDER_GAMMA1, alpha=0.0)
    with pytest.raises(ValueError):
        EnvelopeSpec(Regime.LIPSCHITZ, j=-1)
    with pytest.raises(ValueError):
        envelope(LIP, 0.0, 0.1)
    with pytest.raises(ValueError):
        grid_error_envelope(1.2, 0, 0.1, 0.1)


def test_fit_constant():
    spec = EnvelopeSpec(Regime.HOLDER_GAMMA1)
    obs = [(0.01, 0.1, envelope(spec, 0.01, 0.1))]
    assert fit_envelope_constant(obs, spec) == pytest.approx(1.0)
    obs = [(h, 0.0, 3 * envelope(spec, h, 0.0)) for h in (0.1, 0.01, 0.001)]
    assert fit_envelope_constant(obs, spec) == pytest.approx(3.0)
    obs = [(0.1, 0.0, 0.1), (0.01, 0.0, 0.05), (0.001, 0.2, 0.0)]
    assert fit_envelope_constant(obs, LIP) == pytest.approx(max(1.0, 5.0, 0.0))
    with pytest.raises(ValueError):
        fit_envelope_constant([], LIP)


def test_gronwall_examples():
    assert discrete_gronwall_bound(1.0, 2.0, 0.0, 3) == 6.0
    assert discrete_gronwall_bound(0.7, 0.0, 2.0, 5) == pytest.approx(0.7 ** 5 * 2.0, rel=1e-14)
    assert discrete_gronwall_bound(2.0, 1.0, 1.0, 3) == pytest.approx(15.0, rel=1e-14)


def _brute(A, B, xi0, n):
    xi = xi0
    for _ in range(n):
        xi = A * xi + B
    return xi


@pytest.mark.parametrize("A", [0.0, 0.3, 1 - 1e-12, 1 + 1e-9, 1.4, 2.0, 3.0])
def test_gronwall_equals_extremal_recursion(A):
    for n in (0, 1, 7, 30):
        assert discrete_gronwall_bound(A, 0.9, 1.7, n) == pytest.approx(_brute(A, 0.9, 1.7, n), rel=1e-12)


def test_gronwall_rejects_negative():
    with pytest.raises(ValueError):
        discrete_gronwall_bound(-1, 0, 0, 1)


def test_gronwall_domination_randomised():
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        A, B, xi0 = rng.uniform(0, 3), rng.uniform(0, 5), rng.uniform(0, 5)
        n = int(rng.integers(0, 51))
        xi = xi0 * rng.choice([-1, 1])
        for _ in range(n):
            xi = rng.choice([-1, 1]) * rng.uniform(0, 1) * (A * abs(xi) + B)
        bound = discrete_gronwall_bound(A, B, xi0, n)
        assert abs(xi) <= bound * (1 + 1e-9)


exps = st.floats(0.05, 1.0)


@settings(max_examples=300)
@given(a=exps, b1=exps, b2=exps, g=st.floats(0.05, 0.99), j=st.integers(0, 8),
       h=st.floats(1e-6, 1.0), d=st.floats(0, 1), f=st.floats(1.0, 10.0))
def test_envelopes_monotone(a, b1, b2, g, j, h, d, f):
    h2, d2 = min(h * f, 1.0), min(d * f + 1e-3, 1.0)
    for regime, gam in ((Regime.LIPSCHITZ, 1.0), (Regime.HOLDER_GAMMA1, 1.0), (Regime.HOLDER_GAMMA_LT1, g)):
        spec = EnvelopeSpec(regime, a, b1, b2, gam, j)
        base = envelope(spec, h, d)
        assert envelope(spec, h2, d) >= base * (1 - 1e-12)
        assert envelope(spec, h, d2) >= base * (1 - 1e-12)
    lt = lambda jj: envelope(EnvelopeSpec(Regime.HOLDER_GAMMA_LT1, a, b1, b2, g, jj), h, d)
    if j >= 1:
        assert lt(j + 1) >= lt(j) * (1 - 1e-12)
    assert grid_error_envelope(g, j, h2, d) >= grid_error_envelope(g, j, h, d) * (1 - 1e-12)
    assert grid_error_envelope(g, j, h, d2) >= grid_error_envelope(g, j, h, d) * (1 - 1e-12)
    assert grid_error_envelope(g, j + 1, h, d) >= grid_error_envelope(g, j, h, d) * (1 - 1e-12)


@settings(max_examples=200)
@given(j=st.integers(1, 10), h=st.floats(1e-4, 1.0), d=st.floats(0, 1))
def test_grid_envelope_gamma_to_one(j, h, d):
    limit = (j + 1) * h ** 0.5 + (j + 2) * d
    assert grid_error_envelope(1 - 1e-9, j, h, d) == pytest.approx(limit, rel=1e-6)


def test_grid_envelope_layer0_limit():
    # at j = 0 the gamma < 1 shape has a single delta term
    assert grid_error_envelope(1 - 1e-9, 0, 0.04, 0.3) == pytest.approx(0.2 + 0.3, rel=1e-6)
